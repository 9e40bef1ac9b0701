import math

import pytest

from becdesign.convergence import check_convergent, stability_bound, threshold
from becdesign.ensemble import Ensemble, check_regular, variable_dist
from becdesign.series import taylor_for

from conftest import de_iterate, published


def design_two_block(dc, eps, P, top):
    """Degrees {2..P, top} with the saturating coefficients at eps."""
    tc = taylor_for(check_regular(dc), P + 1)
    lam = {i: tc.T(i) / eps for i in range(2, P + 1)}
    lam[top] = 1.0 - math.fsum(lam.values())
    return Ensemble(variable_dist(lam), check_regular(dc))


def max_rate_design(dc, eps):
    tc = taylor_for(check_regular(dc), 600)
    s = 0.0
    N = None
    for i in range(2, 600):
        s += tc.T(i)
        if s > eps:
            N = i
            break
    lam = {i: tc.T(i) / eps for i in range(2, N)}
    lam[N] = 1.0 - math.fsum(lam.values())
    return Ensemble(variable_dist(lam), check_regular(dc))


C1 = published({2: 0.3354, 3: 0.1716, 4: 0.0095, 5: 0.0783, 6: 0.1620,
                15: 0.1305, 16: 0.1126})


class TestCheckConvergent:
    def test_max_rate_design_convergent_at_its_eps(self):
        e = max_rate_design(6, 0.48)
        v = check_convergent(e, 0.48)
        assert v.convergent
        assert v.margin > 0.0

    def test_two_block_top8_convergent_top7_not(self):
        ok = design_two_block(6, 0.48, 4, 8)
        bad = design_two_block(6, 0.48, 4, 7)
        assert check_convergent(ok, 0.48).convergent
        v = check_convergent(bad, 0.48)
        assert not v.convergent
        assert v.margin < 0.0

    def test_tiny_eps_always_convergent(self):
        e = Ensemble(variable_dist(C1), check_regular(7))
        assert check_convergent(e, 1e-9).convergent

    def test_verdict_is_truthy(self):
        e = max_rate_design(6, 0.48)
        assert bool(check_convergent(e, 0.48))

    def test_eps_out_of_range(self):
        e = max_rate_design(6, 0.48)
        with pytest.raises(ValueError):
            check_convergent(e, 0.0)
        with pytest.raises(ValueError):
            check_convergent(e, 1.0)

    def test_monotone_in_eps(self, rng):
        e = design_two_block(6, 0.48, 4, 8)
        for _ in range(10):
            eps = float(rng.uniform(0.01, 0.48))
            assert check_convergent(e, eps).convergent

    def test_agrees_with_density_evolution(self):
        # brute-force oracle away from any threshold boundary
        cases = [
            (C1, 7, 0.46, True),
            (C1, 7, 0.51, False),
            ({2: 0.3, 3: 0.3, 8: 0.4}, 6, 0.35, None),
            ({2: 0.5, 6: 0.5}, 5, 0.40, None),
            ({3: 0.6, 9: 0.4}, 7, 0.55, None),
        ]
        for lam, dc, eps, expect in cases:
            e = Ensemble(variable_dist(lam), check_regular(dc))
            got = check_convergent(e, eps).convergent
            oracle = de_iterate(lam, {dc: 1.0}, eps)
            assert got == oracle
            if expect is not None:
                assert got == expect


class TestThreshold:
    def test_max_rate_design_threshold_is_design_eps(self):
        e = max_rate_design(6, 0.48)
        assert threshold(e) == pytest.approx(0.48, abs=1e-3)

    def test_all_degree_two_hits_stability_limit(self):
        # eps* solves eps * 1 * rho'(1) = 1, i.e. eps* = 1/5
        e = Ensemble(variable_dist({2: 1.0}), check_regular(6))
        assert threshold(e) == pytest.approx(0.2, abs=1e-3)

    def test_crossing_is_sharp(self):
        e = Ensemble(variable_dist(C1), check_regular(7))
        thr = threshold(e, tol=1e-6)
        assert check_convergent(e, thr - 2e-6).convergent
        assert not check_convergent(e, thr + 2e-6).convergent

    def test_tol_validation(self):
        e = max_rate_design(6, 0.48)
        with pytest.raises(ValueError):
            threshold(e, tol=1e-8)


class TestStabilityBound:
    def test_published_value(self):
        assert stability_bound(check_regular(6), 0.48) == pytest.approx(
            0.41667, abs=5e-5)

    def test_at_t2_equals_one(self):
        rho = check_regular(6)
        t2 = taylor_for(rho, 2).T(2)
        assert stability_bound(rho, t2) == pytest.approx(1.0, abs=1e-12)

    def test_direct_division(self):
        assert stability_bound(check_regular(5), 0.5) == pytest.approx(0.5)
