import numpy as np
import pytest

from becdesign.bounds import rate_upper_bound, threshold_upper_bound


class TestThresholdBound:
    def test_direct_value(self):
        # (1 - 0.5) * (1 - 0.5^6)
        assert threshold_upper_bound(0.5, 6) == pytest.approx(0.4921875)
        assert threshold_upper_bound(0.5, 6) == pytest.approx(0.49219, abs=5e-6)

    def test_vanishes_at_rate_one(self):
        assert threshold_upper_bound(1 - 1e-12, 6) < 1e-11

    def test_dc7_value(self):
        assert threshold_upper_bound(0.5, 7) == pytest.approx(0.49609375)

    def test_below_capacity(self, rng):
        # strictly below 1-R except where R^dc underflows the comparison
        for _ in range(200):
            R = float(rng.uniform(0.01, 0.99))
            dc = float(rng.uniform(2.0, 30.0))
            z = threshold_upper_bound(R, dc)
            assert z <= 1.0 - R
            if R ** dc > 1e-12:
                assert z < 1.0 - R

    def test_monotone_in_dc(self):
        vals = [threshold_upper_bound(0.5, dc) for dc in np.linspace(2, 30, 50)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestRateBound:
    def test_direct_value(self):
        # 1 - 0.48 / (1 - 0.52^5)
        want = 1.0 - 0.48 / (1.0 - 0.52 ** 5)
        assert rate_upper_bound(0.48, 5) == pytest.approx(want)
        assert rate_upper_bound(0.48, 5) == pytest.approx(0.50103, abs=5e-6)

    def test_large_dc_approaches_capacity(self):
        assert rate_upper_bound(0.48, 1e6) == pytest.approx(0.52, abs=1e-9)

    def test_below_one(self, rng):
        for _ in range(200):
            eps = float(rng.uniform(0.01, 0.99))
            dc = float(rng.uniform(2.0, 30.0))
            assert rate_upper_bound(eps, dc) < 1.0

    def test_monotone_in_dc(self):
        vals = [rate_upper_bound(0.48, dc) for dc in np.linspace(2, 30, 50)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


def test_domain_validation():
    with pytest.raises(ValueError):
        threshold_upper_bound(0.0, 6)
    with pytest.raises(ValueError):
        threshold_upper_bound(0.5, 1.5)
    with pytest.raises(ValueError):
        rate_upper_bound(1.0, 6)
