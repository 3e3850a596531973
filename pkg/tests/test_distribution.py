import math

import numpy as np
import pytest

from unicov.analytic import Density1D
from unicov.distribution import (
    EmpiricalUncoveredDistribution,
    histogram,
    sample_distribution,
    sample_distribution_1d,
    vacancy,
)
from unicov.geometry import DimensionError


def _within(value, target, se, k=3.0):
    return abs(value - target) <= k * se


def _prop_se(p, n):
    return math.sqrt(p * (1 - p) / n)


@pytest.fixture(scope="module")
def bank_1d():
    return sample_distribution_1d(0.5, n=1_000_000, seed=3)


class TestExact1D:
    def test_point_masses(self, bank_1d):
        law = Density1D(0.5)
        n = bank_1d.n
        assert _within(bank_1d.mass_at_zero, 1 - 2 / math.e, _prop_se(law.mass_at_zero, n))
        assert _within(bank_1d.mass_at_one, math.exp(-2), _prop_se(law.mass_at_max, n))
        assert bank_1d.exact

    def test_mean(self, bank_1d):
        mean, se = bank_1d.mean()
        assert _within(mean, math.exp(-1.0), se)

    def test_interior_conditional_cdf(self, bank_1d):
        law = Density1D(0.5)
        interior = 2 * 0.5 * np.sort(bank_1d.t[~(bank_1d.exact_one | bank_1d.all_darts_covered)])
        total = law.cdf_interior(1.0)
        emp = np.arange(1, len(interior) + 1) / len(interior)
        ks = np.max(np.abs(emp - law.cdf_interior(interior) / total))
        assert ks <= 0.01

    def test_more_radii(self):
        for r in (0.2, 1.0):
            bank = sample_distribution_1d(r, n=200_000, seed=2)
            law = Density1D(r)
            assert _within(bank.mass_at_zero, law.mass_at_zero, _prop_se(law.mass_at_zero, bank.n))
            assert _within(bank.mass_at_one, law.mass_at_max, _prop_se(law.mass_at_max, bank.n))

    def test_deterministic(self):
        a = sample_distribution_1d(0.3, n=100_000, seed=8)
        b = sample_distribution_1d(0.3, n=100_000, seed=8)
        np.testing.assert_array_equal(a.t, b.t)

    def test_prefix_stable(self):
        # fixed chunking: a shorter bank is a prefix of a longer one
        a = sample_distribution_1d(0.3, n=70_000, seed=8)
        b = sample_distribution_1d(0.3, n=140_000, seed=8)
        np.testing.assert_array_equal(a.t, b.t[:70_000])


@pytest.fixture(scope="module")
def bank():
    return sample_distribution(4 / 9, 2, n=20_000, darts=1024, seed=12)


class TestDarts:
    def test_invariants(self, bank):
        assert np.all((bank.t >= 0) & (bank.t <= 1))
        assert np.all(bank.t[bank.exact_one] == 1.0)
        assert np.all(bank.t[bank.all_darts_covered] == 0.0)
        assert bank.mass_at_zero + bank.interior_fraction + bank.mass_at_one == pytest.approx(1.0)
        assert not bank.exact

    def test_mean_and_mass_at_one(self, bank):
        mean, se = bank.mean()
        assert _within(mean, vacancy(4 / 9, 2), se)
        target = math.exp(-math.pi * (8 / 9) ** 2)
        assert _within(bank.mass_at_one, target, _prop_se(target, bank.n))

    def test_3d(self):
        r = 0.4
        bank = sample_distribution(r, 3, n=10_000, darts=512, seed=4)
        mean, se = bank.mean()
        assert _within(mean, vacancy(r, 3), se)
        target = math.exp(-4 * math.pi / 3 * (2 * r) ** 3)
        assert _within(bank.mass_at_one, target, _prop_se(target, bank.n))

    def test_large_r_fully_covered(self):
        bank = sample_distribution(2.0, 2, n=300, darts=4096, seed=1)
        assert bank.mass_at_zero >= 0.99

    def test_threads_do_not_change_bank(self):
        a = sample_distribution(0.5, 2, n=400, darts=256, seed=5, threads=1)
        b = sample_distribution(0.5, 2, n=400, darts=256, seed=5, threads=4)
        np.testing.assert_array_equal(a.t, b.t)
        np.testing.assert_array_equal(a.exact_one, b.exact_one)

    def test_common_random_numbers(self):
        # trial i uses the same stream at every r, so outcomes mostly agree
        a = sample_distribution(0.4, 2, n=2000, darts=16, seed=5)
        b = sample_distribution(0.5, 2, n=2000, darts=16, seed=5)
        assert np.mean(a.exact_one == b.exact_one) > 0.8

    def test_errors(self):
        with pytest.raises(DimensionError):
            sample_distribution(0.5, 1, n=10)
        with pytest.raises(ValueError):
            sample_distribution(0.5, 2, n=0)
        with pytest.raises(ValueError):
            sample_distribution(0.5, 2, n=10, darts=0)


def _bank(t, one=None, zero=None, r=0.5, d=2):
    t = np.asarray(t, dtype=float)
    one = np.asarray(one if one is not None else t == 1.0)
    zero = np.asarray(zero if zero is not None else np.zeros(len(t), bool))
    return EmpiricalUncoveredDistribution(r, d, 0, 16, t, one, zero)


class TestHistogram:
    def test_all_exact_one(self):
        h = histogram(_bank([1.0] * 5), bins=10)
        assert h.mass_at_one == 1.0 and h.mass_at_zero == 0.0
        assert np.all(h.density == 0)

    def test_normalised(self):
        bank = sample_distribution(4 / 9, 2, n=3000, darts=256, seed=2)
        for bins in (1, 7, 50):
            assert histogram(bank, bins).total() == pytest.approx(1.0, abs=1e-12)

    def test_errors(self):
        with pytest.raises(ValueError):
            histogram(_bank([0.5]), bins=0)
        with pytest.raises(ValueError):
            histogram(_bank([]), bins=3)


def test_csv_round_trip(tmp_path):
    bank = sample_distribution(0.45, 2, n=500, darts=128, seed=7)
    path = tmp_path / "bank.csv"
    bank.to_csv(path)
    back = EmpiricalUncoveredDistribution.from_csv(path)
    assert (back.r, back.d, back.n, back.seed, back.darts_per_trial) == (0.45, 2, 500, 7, 128)
    np.testing.assert_array_equal(back.t, bank.t)
    np.testing.assert_array_equal(back.exact_one, bank.exact_one)
    np.testing.assert_array_equal(back.all_darts_covered, bank.all_darts_covered)
    first = path.read_text().splitlines()[:2]
    assert first[0].startswith("# r=0.45,d=2,n=500,seed=7,darts=128")
    assert first[1] == "t,exact_one,all_darts_covered"


def test_samples_iterator():
    bank = _bank([0.0, 0.25, 1.0], zero=[True, False, False])
    out = list(bank.samples())
    assert out[0].all_darts_covered and out[2].exact_one and out[1].t == 0.25
