import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from periomax import InvalidArgumentError
from periomax.experiments import Experiment, power_curve
from periomax.montecarlo import (
    EmpiricalSample,
    GumbelLaw,
    exact_max_exp_cdf,
    gumbel_cdf,
    gumbel_quantile,
    gumbel_sf,
    ks_distance,
    mc_pvalue,
    rejection_interval,
    replicate,
)
from periomax.rng import SeedSpec, make_rng
from periomax.series import fourier_grid


class TestReplicate:
    def test_constant(self):
        assert replicate(lambda rng: 7.0, 3).values.tolist() == [7.0, 7.0, 7.0]

    def test_same_seed_same_sample(self):
        a = replicate(lambda rng: rng.standard_normal(), 50, seed=9)
        b = replicate(lambda rng: rng.standard_normal(), 50, seed=9)
        np.testing.assert_array_equal(a.values, b.values)

    def test_worker_count_does_not_matter(self):
        exp = Experiment({"kind": "ar1", "phi": 0.3}, 128)
        a = replicate(exp, 40, seed=3, workers=1)
        b = replicate(exp, 40, seed=3, workers=4)
        np.testing.assert_array_equal(a.values, b.values)

    def test_rejects_zero_reps(self):
        with pytest.raises(InvalidArgumentError):
            replicate(lambda rng: 0.0, 0)

    def test_sample_sorted(self):
        s = EmpiricalSample.of([3.0, 1.0, 2.0])
        assert s.values.tolist() == [1.0, 2.0, 3.0] and s.reps == 3


class TestStreams:
    def test_distinct_streams_differ(self):
        a = make_rng(SeedSpec(1, 0)).random(4)
        b = make_rng(SeedSpec(1, 1)).random(4)
        assert not np.array_equal(a, b)

    def test_children_reproducible(self):
        s = SeedSpec(5, 2).child(3, 4)
        np.testing.assert_array_equal(make_rng(s).random(8), make_rng(SeedSpec(5, 2).child(3, 4)).random(8))

    def test_int_shorthand(self):
        np.testing.assert_array_equal(make_rng(7).random(3), make_rng(SeedSpec(7, 0)).random(3))


class TestGumbel:
    def test_cdf_at_zero(self):
        assert gumbel_cdf(0.0) == pytest.approx(math.exp(-1), rel=1e-15)
        assert GumbelLaw()(0.0) == gumbel_cdf(0.0)

    def test_quantile(self):
        assert gumbel_quantile(0.95) == pytest.approx(2.9702, abs=5e-5)
        assert gumbel_quantile(0.95) == pytest.approx(-math.log(-math.log(0.95)), rel=1e-14)

    def test_roundtrip_example(self):
        assert abs(gumbel_quantile(gumbel_cdf(2.5)) - 2.5) <= 1e-12

    def test_roundtrip_interval(self):
        x = np.linspace(-3, 10, 200_001)
        assert np.max(np.abs(gumbel_quantile(gumbel_cdf(x)) - x)) <= 1e-12

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.2, 1.5])
    def test_quantile_domain(self, p):
        with pytest.raises(InvalidArgumentError):
            gumbel_quantile(p)

    @given(st.floats(-3, 30))
    def test_sf_complements_cdf(self, x):
        assert gumbel_sf(x) + gumbel_cdf(x) == pytest.approx(1.0, abs=1e-15)
        assert gumbel_sf(x) > 0

    def test_strictly_increasing(self):
        x = np.linspace(-3, 10, 10_001)
        assert np.all(np.diff(gumbel_cdf(x)) > 0)

    def test_matches_scipy(self):
        x = np.linspace(-3, 8, 50)
        np.testing.assert_allclose(gumbel_cdf(x), stats.gumbel_r.cdf(x), rtol=1e-13)


class TestExactOracle:
    def test_single_exponential(self):
        x = np.linspace(0.01, 8, 40)
        np.testing.assert_allclose(exact_max_exp_cdf(x, 1), 1 - np.exp(-x), rtol=1e-13)
        assert exact_max_exp_cdf(-0.5, 1) == 0.0

    def test_q511_at_zero(self):
        assert exact_max_exp_cdf(0.0, 511) == pytest.approx((1 - 1 / 511) ** 511, rel=1e-14)
        assert exact_max_exp_cdf(0.0, 511) == pytest.approx(0.36752, abs=1e-5)

    def test_q511_close_to_gumbel(self):
        x = np.linspace(-math.log(511), 12, 50_001)
        assert np.max(np.abs(exact_max_exp_cdf(x, 511) - gumbel_cdf(x))) <= 1e-3

    def test_gap_shrinks_with_q(self):
        gaps = []
        for q in (15, 63, 255, 511, 2047):
            x = np.linspace(-math.log(q), 12, 50_001)
            gaps.append(np.max(np.abs(exact_max_exp_cdf(x, q) - gumbel_cdf(x))))
        assert all(b <= a for a, b in zip(gaps, gaps[1:]))

    def test_against_simulation(self):
        rng = np.random.default_rng(17)
        m = rng.standard_exponential((20_000, 31)).max(axis=1) - math.log(31)
        assert ks_distance(m, lambda x: exact_max_exp_cdf(x, 31)) < 1.63 / math.sqrt(20_000)


class TestKS:
    def test_exact_quantiles(self):
        N = 100
        x = gumbel_quantile((np.arange(1, N + 1) - 0.5) / N)
        assert ks_distance(x, gumbel_cdf) == pytest.approx(0.005, abs=1e-12)

    def test_single_point_at_median(self):
        assert ks_distance([gumbel_quantile(0.5)], gumbel_cdf) == pytest.approx(0.5, abs=1e-12)

    def test_agrees_with_scipy(self):
        x = np.random.default_rng(2).gumbel(size=300)
        assert ks_distance(x, gumbel_cdf) == pytest.approx(stats.kstest(x, stats.gumbel_r.cdf).statistic,
                                                           rel=1e-10)

    def test_draws_from_law(self):
        s = replicate(lambda rng: float(rng.gumbel()), 2000, seed=21)
        assert ks_distance(s, gumbel_cdf) <= 1.36 / math.sqrt(2000)


class TestMcPvalue:
    null = EmpiricalSample.of(np.arange(999.0))

    def test_above_all(self):
        assert mc_pvalue(5000.0, self.null) == pytest.approx(1 / 1000)

    def test_below_all(self):
        assert mc_pvalue(-1.0, self.null) == 1.0

    def test_median(self):
        assert abs(mc_pvalue(499.0, self.null) - 0.5) <= 1 / 1000 + 1e-15

    def test_empty(self):
        with pytest.raises(InvalidArgumentError):
            mc_pvalue(1.0, [])


class TestPowerCurve:
    def test_size_and_dominance(self):
        n = 256
        gamma = fourier_grid(n).omegas[20]
        curve = power_curve({"kind": "white"}, [0.0, 5.0], gamma, n, alpha=0.05, reps=400, seed=4)
        lo, hi = rejection_interval(0.05, 400)
        assert lo <= curve.rejection[0] <= hi
        assert curve.rejection[1] == 1.0 and curve.recovery[1] == 1.0

    def test_off_grid_frequency_recovers_nearest(self):
        n = 256
        g = fourier_grid(n)
        gamma = g.omegas[30] + 0.2 * (g.omegas[31] - g.omegas[30])
        curve = power_curve({"kind": "white"}, [3.0], gamma, n, reps=50, seed=1, phase=None)
        assert curve.target_index == 31
        assert curve.recovery[0] == 1.0

    def test_bad_alpha(self):
        with pytest.raises(InvalidArgumentError):
            power_curve({"kind": "white"}, [0.0], 0.5, 64, alpha=1.5, reps=2)


def test_ecdf_export(tmp_path):
    s = EmpiricalSample.of([2.0, 1.0, 2.0, 3.0])
    s.ecdf_to_csv(tmp_path / "e.csv")
    tab = np.loadtxt(tmp_path / "e.csv", delimiter=",", skiprows=1)
    np.testing.assert_allclose(tab, [[1, 0.25], [2, 0.75], [3, 1.0]])
    s.to_csv(tmp_path / "s.csv")
    np.testing.assert_allclose(np.loadtxt(tmp_path / "s.csv", skiprows=1), [1, 2, 2, 3])
