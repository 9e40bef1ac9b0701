import math

import numpy as np
import pytest

from becdesign.ensemble import (
    Ensemble,
    check_dist,
    check_regular,
    design_rate_of,
    perturb_edge_mass,
    variable_dist,
)
from becdesign.errors import DistributionError

from conftest import random_variable_dist


class TestValidation:
    def test_degree_one_rejected(self):
        with pytest.raises(DistributionError):
            variable_dist({1: 0.5, 2: 0.5})

    def test_negative_coefficient_rejected(self):
        with pytest.raises(DistributionError):
            variable_dist({2: -0.1, 3: 1.1})

    def test_bad_sum_rejected(self):
        with pytest.raises(DistributionError):
            variable_dist({2: 0.5, 3: 0.5001})

    def test_tiny_negative_residual_clamped(self):
        d = variable_dist({2: 1.0 + 5e-13, 3: -5e-13})
        assert d.coeffs == {2: 1.0 + 5e-13}

    def test_sum_tolerance_is_tight(self):
        variable_dist({2: 0.5, 3: 0.5 + 9e-13})
        with pytest.raises(DistributionError):
            variable_dist({2: 0.5, 3: 0.5 + 2e-12})

    def test_zero_coefficients_dropped(self):
        d = variable_dist({2: 1.0, 7: 0.0})
        assert d.degrees == (2,)

    def test_immutable(self):
        d = variable_dist({2: 0.5, 3: 0.5})
        with pytest.raises(TypeError):
            d.coeffs[2] = 0.9


class TestEvaluate:
    def test_at_one(self):
        assert check_regular(6).evaluate(1.0) == 1.0

    def test_at_zero(self):
        assert check_regular(6).evaluate(0.0) == 0.0

    def test_hand_value(self):
        # 0.5*0.5 + 0.5*0.25
        d = variable_dist({2: 0.5, 3: 0.5})
        assert d.evaluate(0.5) == pytest.approx(0.375, abs=1e-15)

    def test_at_one_is_one_for_random_distributions(self, rng):
        for _ in range(200):
            d = variable_dist(random_variable_dist(rng))
            assert abs(d.evaluate(1.0) - 1.0) <= 1e-12


class TestAverages:
    def test_check_regular_six(self):
        assert check_regular(6).avg_inverse_degree() == pytest.approx(1 / 6, abs=1e-15)

    def test_all_degree_two(self):
        assert variable_dist({2: 1.0}).avg_inverse_degree() == 0.5

    def test_derivative_at_one(self):
        assert check_regular(6).derivative_at_one() == pytest.approx(5.0)


class TestDesignRate:
    def test_degree_two_both_sides_rate_zero(self):
        e = Ensemble(variable_dist({2: 1.0}), check_dist({2: 1.0}))
        assert design_rate_of(e) == 0.0

    def test_two_block_design_rate(self):
        # degrees {2,3,4,8} with the residual on 8; rate known to 4 decimals
        lam = {2: 0.2 / 0.48, 3: 0.08 / 0.48, 4: 0.048 / 0.48}
        lam[8] = 1.0 - math.fsum(lam.values())
        e = Ensemble(variable_dist(lam), check_regular(6))
        assert design_rate_of(e) == pytest.approx(0.4926, abs=1e-4)


class TestPerturbation:
    def test_zero_k_is_identity(self):
        lam = variable_dist({2: 0.5, 4: 0.5})
        assert perturb_edge_mass(lam, 4, 2, 0.0).coeffs == lam.coeffs

    def test_shift_down_increases_rate(self):
        lam = variable_dist({2: 0.5, 4: 0.5})
        out = perturb_edge_mass(lam, 4, 2, 0.1)
        assert dict(out.coeffs) == pytest.approx({2: 0.6, 4: 0.4})
        assert lam.avg_inverse_degree() == pytest.approx(0.375)
        assert out.avg_inverse_degree() == pytest.approx(0.4)

    def test_shift_up_dominated_pointwise(self):
        lam = variable_dist({2: 0.5, 4: 0.5})
        out = perturb_edge_mass(lam, 2, 4, 0.1)
        xs = np.linspace(1e-3, 1.0, 1000)
        for x in xs:
            assert out.evaluate(x) <= lam.evaluate(x) + 1e-15

    def test_range_violation_names_degree(self):
        lam = variable_dist({2: 0.5, 4: 0.5})
        with pytest.raises(DistributionError, match="degree 4"):
            perturb_edge_mass(lam, 4, 2, 0.6)

    def test_rate_strictly_increases_random(self, rng):
        # moving mass from a higher to a lower degree always raises 1/dv_bar
        for _ in range(1000):
            coeffs = random_variable_dist(rng)
            degs = sorted(coeffs)
            if len(degs) < 2:
                continue
            i, j = sorted(rng.choice(len(degs), size=2, replace=False))
            b, a = degs[i], degs[j]  # a > b
            k = coeffs[a] * float(rng.random())
            if k <= 0.0:
                continue
            lam = variable_dist(coeffs)
            out = perturb_edge_mass(lam, a, b, k)
            assert out.avg_inverse_degree() > lam.avg_inverse_degree()

    def test_pointwise_domination_random(self, rng):
        xs = np.linspace(1e-3, 1.0, 500)
        for _ in range(1000):
            coeffs = random_variable_dist(rng)
            degs = sorted(coeffs)
            if len(degs) < 2:
                continue
            i, j = sorted(rng.choice(len(degs), size=2, replace=False))
            a, b = degs[i], degs[j]  # a < b
            k = coeffs[a] * float(rng.random())
            lam = variable_dist(coeffs)
            out = perturb_edge_mass(lam, a, b, k)
            before = np.array([lam.evaluate(x) for x in xs])
            after = np.array([out.evaluate(x) for x in xs])
            assert np.all(after <= before + 1e-14)
