"""Deterministic designs for a fixed rate (largest threshold).

Same construction skeleton as the fixed-eps category, except the channel
parameter is now solved from the rate constraint: with degrees 2..P and a
top degree D, requiring design rate exactly R forces

    eps = sum_{i=2}^{P} T_i (1/i - 1/D) / (dv_inv - 1/D),

where dv_inv = dc_inv / (1 - R).  The resulting eps is simultaneously the
threshold of the designed ensemble.
"""

from __future__ import annotations

import math

from .ensemble import Ensemble, DegreeDistribution, variable_dist
from .errors import InfeasibleRateError
from . import series
from .convergence import check_convergent
from .design_eps import DesignResult, TYPE_A, TYPE_B, TYPE_MB, N_SCAN_CAP, _built


def _dv_inv(rho: DegreeDistribution, R: float) -> float:
    dc_inv = rho.avg_inverse_degree()
    limit = 1.0 - 2.0 * dc_inv
    if not 0.0 < R < limit:
        raise InfeasibleRateError(
            f"rate {R} not in (0, {limit:.4f}); increase the average check "
            f"node degree by modifying rho"
        )
    return dc_inv / (1.0 - R)


def find_N_rate(rho: DegreeDistribution, R: float) -> int:
    """Unique N with dv_inv * sum T_i > sum T_i/i first holding at N."""
    dv_inv = _dv_inv(rho, R)
    f = 0.0
    g = 0.0
    i = 1
    for t in series.iter_taylor(rho):
        i += 1
        f += t
        g += t / i
        if dv_inv * f > g:
            return i
        if i > N_SCAN_CAP:
            raise InfeasibleRateError(
                f"partial-sum scan did not bracket N after {N_SCAN_CAP} terms"
            )
    raise AssertionError("unreachable")


def _eps_for(tc: series.TaylorCoefficients, dv_inv: float, P: int, D: int) -> float:
    num = math.fsum(tc.T(i) * (1.0 / i - 1.0 / D) for i in range(2, P + 1))
    return num / (dv_inv - 1.0 / D)


def type_a_rate(rho: DegreeDistribution, R: float) -> DesignResult:
    """Maximal-threshold design using all degrees 2..N at rate R."""
    dv_inv = _dv_inv(rho, R)
    N = find_N_rate(rho, R)
    tc = series.taylor_for(rho, N)
    eps = _eps_for(tc, dv_inv, N - 1, N)
    lam = {i: tc.T(i) / eps for i in range(2, N)}
    lam[N] = 1.0 - math.fsum(lam.values())
    return _built(lam, rho, TYPE_A, N, N - 1, eps)


def type_b_rate(rho: DegreeDistribution, R: float, P: int) -> DesignResult:
    """Design on degrees 2..P plus N at rate R.  P = N-1 coincides with type-a."""
    dv_inv = _dv_inv(rho, R)
    N = find_N_rate(rho, R)
    if not 2 <= P <= N - 1:
        raise ValueError(f"P must lie in [2, N-1] = [2, {N - 1}], got {P}")
    if P == N - 1:
        return type_a_rate(rho, R)
    tc = series.taylor_for(rho, N)
    eps = _eps_for(tc, dv_inv, P, N)
    lam = {i: tc.T(i) / eps for i in range(2, P + 1)}
    lam[N] = 1.0 - math.fsum(lam.values())
    return _built(lam, rho, TYPE_B, N, P, eps)


def type_mb_rate(rho: DegreeDistribution, R: float, P: int) -> DesignResult:
    """Smallest top degree whose re-solved design is convergent.

    Each candidate D gets its own eps from the rate equation (with the top
    degree replaced by D) and its own coefficients, then faces the full
    convergence test at that eps.  Candidates are scanned upward from P+1,
    so the first success is the smallest; D = N always succeeds.
    """
    dv_inv = _dv_inv(rho, R)
    N = find_N_rate(rho, R)
    if not 2 <= P <= N - 1:
        raise ValueError(f"P must lie in [2, N-1] = [2, {N - 1}], got {P}")
    if P == N - 1:
        return type_a_rate(rho, R)
    tc = series.taylor_for(rho, N)
    for dv in range(P + 1, N + 1):
        if dv_inv - 1.0 / dv <= 0.0:
            # the rate equation has no positive solution until the top
            # degree exceeds the average variable degree
            continue
        eps = _eps_for(tc, dv_inv, P, dv)
        if not 0.0 < eps < 1.0:
            continue
        lam = {i: tc.T(i) / eps for i in range(2, P + 1)}
        resid = 1.0 - math.fsum(lam.values())
        if resid < 0.0:
            continue
        lam[dv] = lam.get(dv, 0.0) + resid
        ens = Ensemble(variable_dist(lam), rho)
        if check_convergent(ens, eps).convergent:
            return _built(lam, rho, TYPE_MB, N, P, eps)
    raise AssertionError("unreachable: D = N is convergent by construction")
