"""Shared test helpers: independent oracles kept deliberately naive."""

import math

import numpy as np
import pytest


def lam_eval(coeffs, x):
    return sum(c * x ** (i - 1) for i, c in coeffs.items())


def published(coeffs):
    """Coefficient map from a 4-decimal published table: park the rounding
    residual on the top degree so the map sums to one exactly."""
    c = {int(k): float(v) for k, v in coeffs.items()}
    c[max(c)] += 1.0 - math.fsum(c.values())
    return c


def de_iterate(lam_coeffs, rho_coeffs, eps, iters=100_000, target=1e-12):
    """Plain density-evolution iteration x <- eps*lam(1 - rho(1 - x)).

    Returns True when the erasure fraction decays below target.  This is
    the brute-force oracle for convergence verdicts; it is only reliable
    strictly inside or outside the threshold (on the boundary it stalls),
    so callers should probe at eps offset from any suspected threshold.
    """
    x = eps
    for _ in range(iters):
        xn = eps * lam_eval(lam_coeffs, 1.0 - lam_eval(rho_coeffs, 1.0 - x))
        if xn < target:
            return True
        if x - xn < 1e-15:
            return False
        x = xn
    return x < 1e-9


def random_variable_dist(rng, max_degree=20, k=None):
    """Random sparse variable-side coefficient map that sums to one."""
    if k is None:
        k = int(rng.integers(2, 6))
    degs = sorted(rng.choice(np.arange(2, max_degree + 1), size=k, replace=False))
    w = rng.random(k) + 0.05
    w /= w.sum()
    return {int(d): float(v) for d, v in zip(degs, w)}


@pytest.fixture
def rng():
    return np.random.default_rng(20250808)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_REPORT = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_REPORT:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in ACCEPTANCE_REPORT:
            terminalreporter.write_line(line)
