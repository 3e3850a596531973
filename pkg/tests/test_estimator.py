import json
import math

import numpy as np
import pytest

from unicov.analytic import p1_exact, p2_lower_bound
from unicov.distribution import EmpiricalUncoveredDistribution, sample_distribution, sample_distribution_1d
from unicov.estimator import (
    CoverageEstimate,
    SweepResult,
    build_banks,
    p_unique,
    r_opt_2d,
    ropt_from_banks,
    sweep_r,
)
from unicov.geometry import ModelParams


def _const_bank(value, r=0.5, d=2, n=10):
    t = np.full(n, float(value))
    return EmpiricalUncoveredDistribution(r, d, 0, 16, t, t == 1.0, t == 0.0)


@pytest.fixture(scope="module")
def bank_2d():
    return sample_distribution(0.5, 2, n=5000, darts=512, seed=1)


def test_mu_zero(bank_2d):
    est = p_unique(0.0, bank_2d)
    assert est.p_hat == 0.0 and est.std_err == 0.0
    assert est.params == ModelParams(0.0, 0.5, 2)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_all_ones_bank(d):
    est = p_unique(2.0, _const_bank(1.0, r=0.6, d=d))
    from unicov.geometry import ball_volume

    assert est.p_hat == pytest.approx(1 - math.exp(-2.0 * ball_volume(d) * 0.6**d), rel=1e-15)
    assert est.std_err == pytest.approx(0.0, abs=1e-15)


def test_all_zero_bank_flat():
    bank = _const_bank(0.0)
    assert [p_unique(mu, bank).p_hat for mu in (0, 1, 10)] == [0, 0, 0]


def test_errors():
    with pytest.raises(ValueError):
        p_unique(-1.0, _const_bank(0.5))
    with pytest.raises(ValueError):
        p_unique(1.0, _const_bank(0.5, n=0))


def test_1d_against_closed_form():
    bank = sample_distribution_1d(0.5, n=1_000_000, seed=9)
    est = p_unique(1.0, bank)
    assert abs(est.p_hat - p1_exact(1.0, 0.5)) <= 3 * est.std_err


def test_monotone_and_concave_in_mu(bank_2d):
    mus = np.linspace(0, 20, 81)
    p = np.array([p_unique(mu, bank_2d).p_hat for mu in mus])
    assert np.all(np.diff(p) > 0)
    assert np.all(np.diff(p, 2) <= 1e-15)


@pytest.fixture(scope="module")
def sweep():
    rs = [0.1, 0.2, 0.3, 0.5, 0.8, 1.2, 1.5]
    return sweep_r([0.05, 1.0], rs, d=2, n=4000, darts=512, seed=3)


class TestSweep:
    def test_shape(self, sweep):
        assert len(sweep.mu) == len(sweep.r) == len(sweep.estimates) == 14
        assert list(sweep.r[:2]) == [0.1, 0.1] and list(sweep.mu[:2]) == [0.05, 1.0]

    def test_above_lower_bound(self, sweep):
        assert np.all(sweep.p_hat >= sweep.bound - 3 * sweep.std_err)

    def test_small_mu_tight(self, sweep):
        # the gap to the bound is O(mu^2); a few percent at mu = 0.05
        m = (sweep.mu == 0.05) & (sweep.r <= 0.5)
        gap = np.abs(sweep.p_hat[m] - sweep.bound[m]) - 3 * sweep.std_err[m]
        assert np.all(gap <= 0.02 * sweep.bound[m])

    def test_unimodal_endpoints(self, sweep):
        m = sweep.mu == 1.0
        p = sweep.p_hat[m]
        assert p[0] < 0.05 and p[-1] < 0.05
        assert p.max() > 5 * max(p[0], p[-1])

    def test_table(self, sweep):
        table = sweep.table()
        assert tuple(table.columns) == ("mu", "r", "p_hat", "std_err", "bound", "asymptote", "uniform_approx")
        lines = table.to_csv().splitlines()
        assert len(lines) == 15
        recs = json.loads(table.to_json())
        assert list(recs[0]) == list(table.columns)
        assert recs[0]["bound"] == pytest.approx(float(p2_lower_bound(0.05, 0.1)), rel=1e-11)

    def test_length_mismatch(self):
        est = CoverageEstimate(0.1, 0.0, 1, ModelParams(1, 1))
        with pytest.raises(ValueError):
            SweepResult(np.array([1.0]), np.array([1.0, 2.0]), [est], np.zeros(1), np.zeros(1), np.zeros(1))

    def test_bad_r(self):
        with pytest.raises(ValueError):
            sweep_r(1.0, [], n=10)
        with pytest.raises(ValueError):
            sweep_r(1.0, [0.5, -0.1], n=10)


class TestROpt:
    def test_ties_go_to_smaller_r(self):
        banks = [_const_bank(0.0, r=r) for r in (0.6, 0.3, 0.45)]
        assert ropt_from_banks(1.0, banks).r_opt == 0.3

    def test_coarse_grid_warns(self):
        banks = [_const_bank(0.5, r=r) for r in (0.3, 0.5)]
        with pytest.warns(RuntimeWarning, match="span"):
            res = r_opt_2d(1.0, [0.3, 0.5], banks=banks)
        assert "1/90" in res.warning

    def test_fine_grid_no_warning(self):
        grid = [k / 90 for k in range(18, 73)]
        banks = [_const_bank(0.5, r=r) for r in grid]
        res = ropt_from_banks(1.0, banks)
        assert res.warning is None

    def test_mu_zero_uses_slope(self):
        # slope V r^2 E[X] with E[X] = exp(-pi r^2) peaks at pi r^2 = 1
        grid = np.linspace(0.3, 0.8, 51)
        banks = [_const_bank(math.exp(-math.pi * r * r), r=r) for r in grid]
        res = ropt_from_banks(0.0, banks)
        assert abs(res.r_opt - 1 / math.sqrt(math.pi)) <= 0.01
        assert res.estimate.p_hat == 0.0

    def test_small_grid_run(self):
        grid = [0.35, 0.45, 0.55]
        banks = build_banks(grid, 2, n=3000, darts=256, seed=2)
        with pytest.warns(RuntimeWarning):
            res = r_opt_2d(5.0, grid, banks=banks)
        assert res.r_opt in grid
        assert res.estimate.p_hat == max(p_unique(5.0, b).p_hat for b in banks)
