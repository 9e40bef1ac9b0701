"""Upper bounds used as yardsticks for designed ensembles.

Both bounds depend only on the average check node degree, so irregular
check sides pass in dc_bar = 1 / integral(rho).
"""

from __future__ import annotations


def threshold_upper_bound(R: float, dc_bar: float) -> float:
    """Best achievable threshold at rate R: (1 - R) * (1 - R^dc_bar)."""
    if not 0.0 < R < 1.0:
        raise ValueError("R must lie in (0, 1)")
    if dc_bar < 2.0:
        raise ValueError("dc_bar must be at least 2")
    return (1.0 - R) * (1.0 - R ** dc_bar)


def rate_upper_bound(eps: float, dc_bar: float) -> float:
    """Best achievable rate at erasure probability eps:
    1 - eps / (1 - (1-eps)^dc_bar)."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must lie in (0, 1)")
    if dc_bar < 2.0:
        raise ValueError("dc_bar must be at least 2")
    return 1.0 - eps / (1.0 - (1.0 - eps) ** dc_bar)
