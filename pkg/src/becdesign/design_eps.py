"""Deterministic designs for a fixed channel parameter (largest rate).

Given a check side rho and erasure probability eps, the coefficients
lam_i = T_i/eps saturate the near-zero convergence bounds one degree at a
time; what varies between the construction types is how much of the
normalization residual is parked on which top degree:

  type-a : degrees 2..N, residual on N (N fixed by the partial-sum bracket)
  type-b : degrees 2..P plus N, residual on N
  type-mb: degrees 2..P plus the smallest convergent top degree Dv <= N
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .ensemble import Ensemble, DegreeDistribution, variable_dist, design_rate_of
from .errors import BecDesignError, InfeasibleChannelError
from . import series
from .convergence import check_convergent

TYPE_A = "type-a"
TYPE_B = "type-b"
TYPE_MB = "type-mb"

N_SCAN_CAP = 5_000_000


@dataclass(frozen=True)
class DesignResult:
    """A designed ensemble plus its construction provenance."""

    ensemble: Ensemble
    kind: str
    N: int              # bracketed maximum degree (theorem value)
    Dv: int             # realized maximum variable degree
    P: int              # top consecutive low degree (degrees 2..P are used)
    design_eps: float
    design_rate: float
    threshold_claimed: float

    def summary(self) -> str:
        lam = self.ensemble.lam
        coeffs = ", ".join(f"{i}:{c:.4f}" for i, c in lam.coeffs.items())
        return (
            f"{self.kind} N={self.N} Dv={self.Dv} P={self.P} "
            f"eps={self.design_eps:.4f} rate={self.design_rate:.4f} "
            f"threshold={self.threshold_claimed:.4f} lambda={{{coeffs}}}"
        )


def find_N_eps(rho: DegreeDistribution, eps: float) -> int:
    """The unique N with sum_{2}^{N} T_i > eps >= sum_{2}^{N-1} T_i.

    Ties go to the smaller N: the upper comparison is strict, so an exact
    hit at N-1 keeps scanning.
    """
    if not eps < 1.0:
        raise InfeasibleChannelError("eps must be below 1")
    s = 0.0
    gen = series.iter_taylor(rho)
    t2 = next(gen)
    if eps < t2:
        raise InfeasibleChannelError(
            f"eps={eps} is below T_2={t2:.6f}; decrease T_2 by increasing the "
            f"average check node degree (modify rho)"
        )
    s = t2
    i = 2
    if s > eps:
        # cannot happen given eps >= T_2, kept for clarity of the bracket
        return i
    for t in gen:
        i += 1
        s += t
        if s > eps:
            return i
        if i > N_SCAN_CAP:
            raise InfeasibleChannelError(
                f"partial sums have not passed eps={eps} after {N_SCAN_CAP} "
                f"terms; eps is too close to 1 for this check side"
            )
    raise AssertionError("unreachable")


def _built(lam_coeffs, rho, kind, N, P, eps) -> DesignResult:
    lam = variable_dist(lam_coeffs)
    ens = Ensemble(lam, rho)
    verdict = check_convergent(ens, eps)
    if not verdict.convergent:
        raise BecDesignError(
            f"designed ensemble failed its own convergence certificate "
            f"(margin {verdict.margin:.3e} at x={verdict.witness_x:.4g})"
        )
    rate = design_rate_of(ens)
    if rate <= 0.0:
        raise InfeasibleChannelError(
            f"designed rate {rate:.4f} is not positive at eps={eps:.4f} with "
            f"P={P}; use more consecutive degrees or increase the average "
            f"check node degree"
        )
    if rate >= 1.0:
        raise BecDesignError(f"design rate {rate} outside (0, 1)")
    return DesignResult(ens, kind, N, lam.max_degree, P, eps, rate, eps)


def type_a_eps(rho: DegreeDistribution, eps: float) -> DesignResult:
    """Maximal-rate design using all degrees 2..N."""
    N = find_N_eps(rho, eps)
    tc = series.taylor_for(rho, N)
    lam = {i: tc.T(i) / eps for i in range(2, N)}
    lam[N] = 1.0 - math.fsum(lam.values())
    return _built(lam, rho, TYPE_A, N, N - 1, eps)


def type_b_eps(rho: DegreeDistribution, eps: float, P: int) -> DesignResult:
    """Design on degrees 2..P plus N.  P = N-1 coincides with type-a."""
    N = find_N_eps(rho, eps)
    if not 2 <= P <= N - 1:
        raise ValueError(f"P must lie in [2, N-1] = [2, {N - 1}], got {P}")
    if P == N - 1:
        return type_a_eps(rho, eps)
    tc = series.taylor_for(rho, N)
    lam = {i: tc.T(i) / eps for i in range(2, P + 1)}
    lam[N] = 1.0 - math.fsum(lam.values())
    return _built(lam, rho, TYPE_B, N, P, eps)


def dv_lower_bound(rho: DegreeDistribution, eps: float, P: int) -> float:
    """Sufficient top degree for convergence of the two-block design.

    Any Dv at or above this value keeps the ensemble on degrees
    {2..P, Dv} convergent; it may overshoot the smallest workable Dv.
    """
    N = find_N_eps(rho, eps)
    if not 2 <= P <= N - 1:
        raise ValueError(f"P must lie in [2, N-1] = [2, {N - 1}], got {P}")
    tc = series.taylor_for(rho, N)
    num = math.fsum((N - i) * tc.T(i) for i in range(P + 1, N))
    den = eps - tc.partial_sum(P)
    return N - num / den


def type_mb_eps(rho: DegreeDistribution, eps: float, P: int) -> DesignResult:
    """Smallest convergent top degree for the degrees {2..P, Dv} design.

    The sufficient bound gives the starting candidate; from there the
    search walks downward while candidates stay convergent, so minimality
    is certified by the first failing Dv - 1 rather than trusted from the
    bound alone.
    """
    N = find_N_eps(rho, eps)
    if not 2 <= P <= N - 1:
        raise ValueError(f"P must lie in [2, N-1] = [2, {N - 1}], got {P}")
    if P == N - 1:
        return type_a_eps(rho, eps)
    tc = series.taylor_for(rho, N)
    head = {i: tc.T(i) / eps for i in range(2, P + 1)}
    resid = 1.0 - math.fsum(head.values())

    def candidate_ok(dv: int) -> bool:
        lam = dict(head)
        lam[dv] = lam.get(dv, 0.0) + resid
        return check_convergent(Ensemble(variable_dist(lam), rho), eps).convergent

    start = max(P + 1, min(N, math.ceil(dv_lower_bound(rho, eps, P))))
    dv = start
    if candidate_ok(dv):
        while dv - 1 >= P + 1 and candidate_ok(dv - 1):
            dv -= 1
    else:
        # the bound is sufficient analytically; if a borderline candidate
        # fails the conservative certificate, move up (N always passes)
        while dv < N:
            dv += 1
            if candidate_ok(dv):
                break
    lam = dict(head)
    lam[dv] = lam.get(dv, 0.0) + resid
    return _built(lam, rho, TYPE_MB, N, P, eps)
