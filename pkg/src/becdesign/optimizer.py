"""Rate optimization over a fixed set of variable degrees.

For fixed eps the feasible region is linear in the coefficients: the
objective sum lam_i/i and the normalization are linear, and the
convergence condition discretized at grid points x_k gives

    eps * sum_i lam_i (1 - rho(1 - x_k))^{i-1} <= x_k - slack.

The solver works cutting-plane style: solve a small LP on a subsample of
the grid, add the most violated rows from the full grid, repeat, and
finally certify the winner with the exact convergence test (retightening
the slack and re-solving if certification fails).  A coarse
simplex-lattice enumeration is available as an independent cross-check.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .ensemble import Ensemble, DegreeDistribution, variable_dist
from .errors import BecDesignError, InfeasibleSearchError
from .convergence import check_convergent, GRID_POINTS, X_MIN, REFINE_PER_DECADE
from .bounds import rate_upper_bound
from . import simplex

LP_SLACK = 1e-9
SUBSAMPLE = 200
CUT_BATCH = 50


@dataclass(frozen=True)
class SearchReport:
    degree_set: tuple
    best_lambda: DegreeDistribution
    best_rate: float
    ratio_to_bound: float
    method: str


def _constraint_grid(eps: float, resolution: int) -> np.ndarray:
    x = np.linspace(X_MIN, eps, resolution)
    hi = min(1e-2, eps)
    if hi > X_MIN:
        decades = np.log10(hi / X_MIN)
        npts = max(int(round(decades * REFINE_PER_DECADE)) + 1, 2)
        x = np.concatenate([x, np.geomspace(X_MIN, hi, npts)])
    return np.unique(x)


def _report(degrees, rho, eps, lam_vec, method) -> SearchReport:
    lam = {d: float(v) for d, v in zip(degrees, lam_vec) if v > 1e-12}
    # push rounding residue onto the largest surviving degree
    res = 1.0 - math.fsum(lam.values())
    top = max(lam)
    lam[top] += res
    dist = variable_dist(lam)
    dc_inv = rho.avg_inverse_degree()
    rate = 1.0 - dc_inv / dist.avg_inverse_degree()
    bound = rate_upper_bound(eps, 1.0 / dc_inv)
    return SearchReport(tuple(degrees), dist, rate, rate / bound, method)


def optimize_lambda(
    degrees,
    rho: DegreeDistribution,
    eps: float,
    resolution: int = GRID_POINTS,
    slack: float = LP_SLACK,
) -> SearchReport:
    """Rate-maximizing convergent coefficients on the given degrees."""
    degrees = sorted(set(int(d) for d in degrees))
    if len(degrees) < 1 or degrees[0] < 2:
        raise ValueError("need degrees >= 2")
    x = _constraint_grid(eps, resolution)
    y = 1.0 - np.array([rho.evaluate(v) for v in 1.0 - x])
    # rows normalized by x for conditioning: eps * sum lam_i y^{i-1} / x <= 1 - slack/x
    cols = np.stack([eps * y ** (d - 1) / x for d in degrees], axis=1)

    rp1 = rho.derivative_at_one()
    c = np.array([1.0 / d for d in degrees])
    A_eq = np.ones((1, len(degrees)))
    b_eq = np.array([1.0])

    for attempt in range(8):
        rhs_full = 1.0 - slack / x
        idx = list(range(0, len(x), max(1, len(x) // SUBSAMPLE)))
        idx = sorted(set(idx + [len(x) - 1]))
        active = np.zeros(len(x), dtype=bool)
        active[idx] = True
        lam_vec = None
        for _ in range(40):
            A_ub = cols[active]
            b_ub = rhs_full[active]
            if degrees[0] == 2:
                srow = np.zeros(len(degrees))
                srow[0] = eps * rp1
                A_ub = np.vstack([A_ub, srow])
                b_ub = np.append(b_ub, 1.0 - slack)
            lam_vec, _ = simplex.maximize(c, A_ub, b_ub, A_eq, b_eq)
            viol = cols @ lam_vec - rhs_full
            bad = np.nonzero(viol > 1e-12)[0]
            bad = bad[~active[bad]]
            if bad.size == 0:
                break
            worst = bad[np.argsort(-viol[bad])][:CUT_BATCH]
            active[worst] = True
        report = _report(degrees, rho, eps, lam_vec, "lp")
        if check_convergent(Ensemble(report.best_lambda, rho), eps).convergent:
            return report
        slack *= 10.0
    raise BecDesignError(
        "LP result failed convergence certification at every slack level"
    )


def grid_search_lambda(
    degrees,
    rho: DegreeDistribution,
    eps: float,
    step: float = 0.005,
    feas_points: int = 256,
) -> SearchReport:
    """Simplex-lattice enumeration cross-check for optimize_lambda.

    Enumerates all coefficient vectors on the lattice with the given step,
    filters by the discretized convergence condition, refines once around
    the best point at a tenth of the step, and certifies the winner.
    """
    degrees = sorted(set(int(d) for d in degrees))
    x = _constraint_grid(eps, feas_points)
    y = 1.0 - np.array([rho.evaluate(v) for v in 1.0 - x])
    Y = np.stack([eps * y ** (d - 1) / x for d in degrees], axis=1)
    rhs = 1.0 - LP_SLACK / x
    rp1 = rho.derivative_at_one()
    obj = np.array([1.0 / d for d in degrees])

    def best_on(points):
        best = None
        for chunk_start in range(0, len(points), 50_000):
            L = points[chunk_start:chunk_start + 50_000]
            ok = np.all(L @ Y.T <= rhs[None, :], axis=1)
            if degrees[0] == 2:
                ok &= eps * rp1 * L[:, 0] <= 1.0
            if not ok.any():
                continue
            rates = L[ok] @ obj
            k = int(np.argmax(rates))
            cand = (float(rates[k]), L[ok][k])
            if best is None or cand[0] > best[0]:
                best = cand
        return best

    k = len(degrees)
    steps = int(round(1.0 / step))
    lattice = np.array([
        comp for comp in _compositions(steps, k)
    ], dtype=float) * step
    best = best_on(lattice)
    if best is None:
        raise InfeasibleSearchError("no lattice point satisfies the constraints")
    # one refinement pass around the winner
    return _refine_and_report(degrees, rho, eps, best[1], step / 10.0, best_on)


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _refine_and_report(degrees, rho, eps, center, fine, best_on):
    deltas = np.arange(-10, 11) * fine
    axes = [np.clip(center[i] + deltas, 0.0, 1.0) for i in range(len(degrees))]
    pts = []
    for combo in itertools.product(*axes):
        s = math.fsum(combo)
        if abs(s - 1.0) < fine / 2:
            v = np.array(combo)
            v[-1] += 1.0 - s
            if v[-1] >= 0.0:
                pts.append(v)
    best = best_on(np.array(pts)) if pts else None
    if best is None:
        best = (None, center)
    report = _report(degrees, rho, eps, best[1], "grid")
    if not check_convergent(Ensemble(report.best_lambda, rho), eps).convergent:
        raise BecDesignError("grid search winner failed certification")
    return report


def sweep_degree_sets(
    P: int,
    dv_max: int,
    rho: DegreeDistribution,
    eps: float,
    require_degree_two: bool = False,
    resolution: int = GRID_POINTS,
):
    """Optimize every P-subset of degrees {2..dv_max}, best rate first.

    All C(dv_max - 1, P) subsets are enumerated; pass require_degree_two to
    restrict to subsets containing degree 2.  Infeasible subsets are
    dropped from the result.
    """
    reports = []
    for degs in itertools.combinations(range(2, dv_max + 1), P):
        if require_degree_two and degs[0] != 2:
            continue
        try:
            reports.append(optimize_lambda(degs, rho, eps, resolution=resolution))
        except InfeasibleSearchError:
            continue
    reports.sort(key=lambda r: -r.best_rate)
    return reports
