"""Taylor coefficients of the inverse check polynomial.

Everything downstream is built from the expansion

    rho^{-1}(1 - x) = 1 - sum_{i>=2} T_i x^{i-1},  T_i > 0,

around x = 0.  For a check-regular side the T_i have a closed product form;
for a general check side they come from order-by-order inversion of the
formal series x = 1 - rho(1 - w).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ensemble import DegreeDistribution
from .errors import DegenerateDistributionError, NumericalDegradationError

# design formulas only need T_2..T_N; convergence checking benefits from a
# longer tail, so the default truncation is generous but bounded
DEFAULT_M = 200
GENERAL_M_CAP = 8192


@dataclass(frozen=True)
class TaylorCoefficients:
    """T_i for i = 2..M plus truncation bookkeeping.

    values[k] holds T_{k+2}.  tail_mass = 1 - sum(values) is the exact mass
    beyond the truncation since the full series sums to one.
    """

    values: np.ndarray
    M: int
    tail_mass: float

    def T(self, i: int) -> float:
        if i < 2 or i > self.M:
            raise IndexError(f"T_{i} outside stored range 2..{self.M}")
        return float(self.values[i - 2])

    def partial_sum(self, upto: int) -> float:
        """sum_{i=2}^{upto} T_i."""
        if upto < 2:
            return 0.0
        return float(math.fsum(self.values[: upto - 1]))

    def weighted_partial_sum(self, upto: int) -> float:
        """sum_{i=2}^{upto} T_i / i."""
        if upto < 2:
            return 0.0
        idx = np.arange(2, upto + 1)
        return float(math.fsum(self.values[: upto - 1] / idx))


def _regular_terms(dc: int):
    """Generator of T_2, T_3, ... for a check-regular side of degree dc.

    T_i is the absolute value of the fractional binomial binom(alpha, i-1)
    with alpha = 1/(dc-1), accumulated as a telescoping product so there are
    no factorials and no alternating-sign cancellation.
    """
    alpha = 1.0 / (dc - 1)
    t = alpha
    i = 2
    while True:
        yield t
        i += 1
        t *= ((i - 2) - alpha) / (i - 1)


def taylor_check_regular(dc: int, M: int) -> TaylorCoefficients:
    """Closed-form coefficients for a check-regular side."""
    if dc < 3:
        raise DegenerateDistributionError(
            "check degree 2 is degenerate: the inverse expansion is exactly "
            "1 - x and only T_2 exists"
        )
    if M < 2:
        raise ValueError("M must be at least 2")
    gen = _regular_terms(dc)
    vals = np.fromiter((next(gen) for _ in range(M - 1)), dtype=float, count=M - 1)
    tail = 1.0 - math.fsum(vals)
    return TaylorCoefficients(vals, M, tail)


def _phi_coeffs(rho: DegreeDistribution) -> np.ndarray:
    """Coefficients c_k of phi(w) = 1 - rho(1 - w) = sum_{k>=1} c_k w^k."""
    K = rho.max_degree - 1
    c = np.zeros(K + 1)
    for i, ri in rho.coeffs.items():
        for k in range(1, i):
            c[k] += ri * math.comb(i - 1, k) * (-1.0) ** (k + 1)
    return c


def taylor_general(rho: DegreeDistribution, M: int) -> TaylorCoefficients:
    """Coefficients for a general check side by compositional inversion.

    Writing rho^{-1}(1-x) = 1 - w(x) and phi(w) = 1 - rho(1-w), the series
    w(x) is the compositional inverse of the polynomial phi.  Coefficient
    t_n of w depends only on t_1..t_{n-1}, so a triangular solve suffices:
    maintain the power tables P_k[m] = [x^m] w(x)^k, fill them column by
    column, and read t_n off the order-n coefficient identity.
    """
    if rho.max_degree < 3:
        raise DegenerateDistributionError(
            "check side concentrated on degree 2 has no usable expansion"
        )
    if M < 2:
        raise ValueError("M must be at least 2")
    c = _phi_coeffs(rho)
    K = len(c) - 1
    nmax = M - 1  # t_1..t_{M-1}, with T_i = t_{i-1}
    t = np.zeros(nmax + 1)
    P = np.zeros((K + 1, nmax + 1))
    t[1] = 1.0 / c[1]
    P[1, 1] = t[1]
    for n in range(2, nmax + 1):
        for k in range(2, min(K, n) + 1):
            # [x^n] w^k = sum_j [x^j] w^{k-1} * t_{n-j}; all inputs already known
            P[k, n] = float(np.dot(P[k - 1, k - 1:n], t[n - k + 1:0:-1]))
        s = float(np.dot(c[2:min(K, n) + 1], P[2:min(K, n) + 1, n]))
        t[n] = -s / c[1]
        P[1, n] = t[n]
    vals = t[1:]
    bad = np.nonzero(vals <= 0.0)[0]
    if bad.size:
        i = int(bad[0]) + 2
        raise NumericalDegradationError(i, float(vals[bad[0]]))
    tail = 1.0 - math.fsum(vals)
    return TaylorCoefficients(vals, M, tail)


_cache: dict = {}


def taylor_for(rho: DegreeDistribution, M: int) -> TaylorCoefficients:
    """Coefficients for rho with caching, closed form when check-regular.

    The cache keeps the longest expansion computed so far per check side and
    serves shorter requests by slicing, which matters because threshold
    bisection re-reads the same series dozens of times.
    """
    key = tuple(sorted(rho.coeffs.items()))
    cached = _cache.get(key)
    if cached is None or cached.M < M:
        if rho.is_regular():
            cached = taylor_check_regular(rho.max_degree, M)
        else:
            if M > GENERAL_M_CAP:
                raise ValueError(
                    f"general series truncation {M} beyond cap {GENERAL_M_CAP}; "
                    f"use a check-regular side or reduce the request"
                )
            cached = taylor_general(rho, M)
        _cache[key] = cached
    if cached.M == M:
        return cached
    vals = cached.values[: M - 1]
    return TaylorCoefficients(vals, M, 1.0 - math.fsum(vals))


def iter_taylor(rho: DegreeDistribution):
    """Yield T_2, T_3, ... lazily; used by the partial-sum scans."""
    if rho.is_regular():
        if rho.max_degree < 3:
            raise DegenerateDistributionError(
                "check degree 2 is degenerate: only T_2 exists"
            )
        yield from _regular_terms(rho.max_degree)
    else:
        M = 256
        i = 2
        while True:
            tc = taylor_for(rho, M)
            while i <= tc.M:
                yield tc.T(i)
                i += 1
            M *= 2  # extends the cache; raises once the cap is hit


def rho_inverse(rho: DegreeDistribution, y: float) -> float:
    """The unique u in [0,1] with rho(u) = y.

    rho is strictly increasing on [0,1], so a bisection bracket plus Newton
    polishing converges fast; the safeguard keeps every iterate bracketed.
    """
    if not 0.0 <= y <= 1.0:
        raise ValueError("y outside [0, 1]")
    if y == 0.0:
        return 0.0
    if y == 1.0:
        return 1.0
    lo, hi = 0.0, 1.0
    u = y  # decent starting point since rho(u) <= u on [0,1]
    for _ in range(200):
        f = rho.evaluate(u) - y
        if f > 0.0:
            hi = u
        else:
            lo = u
        df = math.fsum(c * (i - 1) * u ** (i - 2) for i, c in rho.coeffs.items())
        if df > 0.0:
            step = u - f / df
        else:
            step = 0.5 * (lo + hi)
        if not lo < step < hi:
            step = 0.5 * (lo + hi)
        if abs(step - u) < 1e-16:
            u = step
            break
        u = step
    return u
