"""Degree-distribution value objects and their algebra.

Distributions are edge-perspective: the coefficient stored for degree i is
the fraction of edges attached to degree-i nodes, i.e. the coefficient of
x^(i-1) in the usual polynomial notation.  Storage is a sparse degree map
since designed distributions routinely skip degrees (e.g. {2,3,4,13}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .errors import DistributionError

SUM_TOL = 1e-12        # sum-to-one validation tolerance
CLAMP_TOL = 1e-12      # residuals this far below zero are rounding, clamp them

VARIABLE = "variable"
CHECK = "check"


@dataclass(frozen=True)
class DegreeDistribution:
    """Edge-perspective degree distribution for one side of the graph."""

    coeffs: Mapping[int, float]
    side: str

    def __post_init__(self):
        if self.side not in (VARIABLE, CHECK):
            raise DistributionError(f"unknown side {self.side!r}")
        cleaned = {}
        for deg, c in self.coeffs.items():
            deg = int(deg)
            c = float(c)
            if deg < 2:
                raise DistributionError(
                    f"degree {deg} not allowed: minimum degree is 2"
                )
            if c < 0.0:
                if c >= -CLAMP_TOL:
                    c = 0.0
                else:
                    raise DistributionError(
                        f"negative coefficient {c:.3e} at degree {deg}"
                    )
            if c > 0.0:
                cleaned[deg] = c
        if not cleaned:
            raise DistributionError("empty distribution")
        total = math.fsum(cleaned.values())
        if abs(total - 1.0) > SUM_TOL:
            raise DistributionError(
                f"coefficients sum to {total!r}, off by {total - 1.0:.3e}"
            )
        object.__setattr__(self, "coeffs", MappingProxyType(dict(sorted(cleaned.items()))))

    @property
    def degrees(self):
        return tuple(self.coeffs.keys())

    @property
    def max_degree(self) -> int:
        return max(self.coeffs)

    @property
    def min_degree(self) -> int:
        return min(self.coeffs)

    def coeff(self, degree: int) -> float:
        return self.coeffs.get(degree, 0.0)

    def evaluate(self, x: float) -> float:
        """Value of sum_i c_i x^(i-1)."""
        return math.fsum(c * x ** (i - 1) for i, c in self.coeffs.items())

    def derivative_at_one(self) -> float:
        """Value of the derivative at x = 1, i.e. sum_i c_i (i-1)."""
        return math.fsum(c * (i - 1) for i, c in self.coeffs.items())

    def avg_inverse_degree(self) -> float:
        """sum_i c_i / i, which equals the integral of the polynomial on [0,1].

        The average degree of the side is the reciprocal of this value.
        """
        return math.fsum(c / i for i, c in self.coeffs.items())

    def is_regular(self) -> bool:
        return len(self.coeffs) == 1


def evaluate(dist: DegreeDistribution, x: float) -> float:
    return dist.evaluate(x)


def avg_inverse_degree(dist: DegreeDistribution) -> float:
    return dist.avg_inverse_degree()


def variable_dist(coeffs: Mapping[int, float]) -> DegreeDistribution:
    return DegreeDistribution(coeffs, VARIABLE)


def check_dist(coeffs: Mapping[int, float]) -> DegreeDistribution:
    return DegreeDistribution(coeffs, CHECK)


def check_regular(dc: int) -> DegreeDistribution:
    """Check side concentrated on a single degree dc."""
    return DegreeDistribution({dc: 1.0}, CHECK)


@dataclass(frozen=True)
class Ensemble:
    """A (lambda, rho) pair. `lam` is the variable side, `rho` the check side."""

    lam: DegreeDistribution
    rho: DegreeDistribution

    def __post_init__(self):
        if self.lam.side != VARIABLE:
            raise DistributionError("lam must be a variable-side distribution")
        if self.rho.side != CHECK:
            raise DistributionError("rho must be a check-side distribution")

    @property
    def design_rate(self) -> float:
        return design_rate_of(self)


def design_rate_of(e: Ensemble) -> float:
    """Design rate 1 - dv_bar/dc_bar, valid under the full-rank assumption.

    Sampled finite graphs may have slightly higher true rate when the
    parity-check matrix is rank deficient; only the design rate is reported.
    """
    return 1.0 - e.rho.avg_inverse_degree() / e.lam.avg_inverse_degree()


def perturb_edge_mass(
    lam: DegreeDistribution, a: int, b: int, k: float
) -> DegreeDistribution:
    """Move edge mass k from degree a to degree b, other degrees untouched.

    Moving mass down (a > b) strictly increases the rate; moving mass up
    (a < b) can only decrease the polynomial pointwise on (0, 1], so a
    convergent distribution stays convergent.
    """
    if a == b:
        raise DistributionError("a and b must differ")
    if k < 0.0:
        raise DistributionError("k must be nonnegative")
    new = dict(lam.coeffs)
    ca = new.get(a, 0.0) - k
    cb = new.get(b, 0.0) + k
    if ca < -CLAMP_TOL:
        raise DistributionError(
            f"perturbation drives degree {a} coefficient to {ca:.3e}"
        )
    if cb > 1.0 + CLAMP_TOL:
        raise DistributionError(
            f"perturbation drives degree {b} coefficient to {cb:.3e}"
        )
    new[a] = max(ca, 0.0)
    new[b] = min(cb, 1.0)
    return DegreeDistribution(new, lam.side)
