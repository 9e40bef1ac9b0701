"""Convergence verdicts and thresholds.

An ensemble is convergent at erasure probability eps when

    eps * lam(1 - rho(1 - x)) < x   for 0 < x <= eps,

equivalently, with z = 1 - rho(1 - x),

    h(z) = 1 - rho^{-1}(1 - z) - eps*lam(z) > 0.

The test runs in two stages.  Deterministic designs sit exactly on the
stability boundary (eps*lam_2 = T_2, and often the next several
coefficients too), so near x = 0 any grid evaluation is pure cancellation
noise.  Stage 1 therefore compares eps*lam_i against T_i index by index:
coefficients equal within a saturation tolerance are treated as exact
design equalities, and the first slack index decides the near-zero sign
analytically.  Stage 2 evaluates h in series form on a grid covering
[x_min, eps]: the saturated prefix contributes exactly zero, every term is
formed as a coefficient difference before evaluation (no cancellation),
and each grid value carries a running floating-point error bound, so a
verdict is only issued where the sign is certified.  Points whose sign
cannot be certified count as non-convergent, which keeps the test
conservative.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .ensemble import Ensemble, DegreeDistribution
from . import series

GRID_POINTS = 10_000
X_MIN = 1e-4
REFINE_PER_DECADE = 20
SATURATION_TOL = 1e-12
MACH_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class ConvergenceVerdict:
    convergent: bool
    margin: float      # certified lower bound on min_x [x - eps*lam(1-rho(1-x))]
    witness_x: float   # grid point attaining the minimum (0.0 for the x->0 screen)

    def __bool__(self):
        return self.convergent


def _series_order(dv: int, rho: DegreeDistribution) -> int:
    M = max(2 * dv + 64, 600)
    if not rho.is_regular():
        M = min(M, series.GENERAL_M_CAP)
        M = max(M, dv + 64)
    return M


def _grid(eps: float) -> np.ndarray:
    x_min = min(X_MIN, eps / 10.0)
    x = np.linspace(x_min, eps, GRID_POINTS)
    hi = min(1e-2, eps)
    if hi > x_min:
        decades = np.log10(hi / x_min)
        npts = max(int(round(decades * REFINE_PER_DECADE)) + 1, 2)
        x = np.concatenate([x, np.geomspace(x_min, hi, npts)])
    return np.unique(x)


REGULAR_M_CAP = 32768


def check_convergent(e: Ensemble, eps: float, M: int | None = None) -> ConvergenceVerdict:
    """Two-stage convergence test at channel parameter eps."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    lam, rho = e.lam, e.rho
    dv = lam.max_degree
    if M is None:
        M = _series_order(dv, rho)
    m_cap = REGULAR_M_CAP if rho.is_regular() else series.GENERAL_M_CAP
    M = min(M, m_cap)

    x = _grid(eps)
    rho_coef = np.zeros(rho.max_degree)
    for i, ri in rho.coeffs.items():
        rho_coef[i - 1] = ri
    z = 1.0 - npoly.polyval(1.0 - x, rho_coef)

    while True:
        tc = series.taylor_for(rho, M)

        # coefficient differences d_i = T_i - eps*lam_i, i = 2..M
        d = tc.values.copy()
        for i, li in lam.coeffs.items():
            d[i - 2] -= eps * li

        # stage 1: saturated prefix is a design equality, first slack index
        # decides the x -> 0 behaviour
        for i in range(2, dv + 1):
            di = d[i - 2]
            if abs(di) <= SATURATION_TOL:
                d[i - 2] = 0.0
                continue
            if di < 0.0:
                return ConvergenceVerdict(False, float(di), 0.0)
            break

        # stage 2: certified grid evaluation in series form.  The dropped
        # tail sum_{i>M} T_i z^{i-1} is positive and at most tail_mass*z^M,
        # so each point has three possible states: certified positive,
        # certified negative even after granting the whole dropped tail,
        # or indeterminate because the truncation is too short.
        dcoef = np.zeros(M)
        dcoef[1:] = d
        vals = npoly.polyval(z, dcoef)
        mag = npoly.polyval(z, np.abs(dcoef))
        err = (2.0 * M) * MACH_EPS * mag
        certified = vals - err

        # points whose every term underflows carry no information (below
        # z ~ 1e-5 at large design order); stage 1 owns the x -> 0 sign
        live = mag > 0.0
        if not live.any():
            return ConvergenceVerdict(True, 0.0, float(x[0]))
        certified = certified[live]
        xl = x[live]
        k = int(np.argmin(certified))
        margin = float(certified[k])
        if margin > 0.0:
            return ConvergenceVerdict(True, margin, float(xl[k]))
        tail_ub = tc.tail_mass * z[live] ** M
        if np.any(vals[live] + err[live] + tail_ub < 0.0):
            return ConvergenceVerdict(False, margin, float(xl[k]))
        if M >= m_cap:
            # truncation exhausted: conservative verdict
            return ConvergenceVerdict(False, margin, float(xl[k]))
        M = min(2 * M, m_cap)


def threshold(e: Ensemble, tol: float = 1e-6) -> float:
    """Supremum of convergent channel parameters, located by bisection."""
    if tol < 1e-7:
        raise ValueError("tol below 1e-7 is not supported")
    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if check_convergent(e, mid).convergent:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def stability_bound(rho: DegreeDistribution, eps: float) -> float:
    """Largest admissible degree-2 coefficient at channel parameter eps.

    This is T_2/eps with T_2 = 1/rho'(1), the usual stability condition
    eps * lam_2 * rho'(1) <= 1 rearranged.
    """
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    return 1.0 / (rho.derivative_at_one() * eps)
