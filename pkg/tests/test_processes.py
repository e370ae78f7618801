import math
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from periomax import InsufficientProfileError, InvalidArgumentError, ShapeError
from periomax.coeffs import as_coefficients, explicit, geometric, polynomial
from periomax.processes import (
    DependenceProfile,
    InnovationSpec,
    LinearModel,
    RecursionModel,
    check_conditions,
    coupled_pair,
    coupled_theta,
    covariance_bound,
    dependence_profile,
    fourier_approx_gap,
    gen_innovations,
    m_approx,
    process_from_dict,
    simulate,
    spectral_density,
    theta_tail,
)
from periomax.processes.conditions import decreasing_to_zero
from periomax.series import fourier_grid
from periomax.spectral import linear_spectral_density

GEOM = {"kind": "linear", "coeffs": {"family": "geometric", "rho": 0.5}}


class TestInnovations:
    def test_gaussian_moments(self):
        e = gen_innovations(InnovationSpec("gaussian"), 10**6, 1)
        assert abs(e.mean()) <= 4 / 1000
        assert abs(e.var() - 1) <= 0.01

    def test_two_point_support(self):
        e = gen_innovations(InnovationSpec("symmetric_two_point"), 1000, 2)
        assert set(np.unique(e)) == {-1.0, 1.0}

    def test_student_t_standardized(self):
        e = gen_innovations(InnovationSpec("student_t", 8), 10**6, 3)
        assert abs(e.var() - 1) <= 0.02

    def test_pareto_standardized(self):
        e = gen_innovations(InnovationSpec("pareto", 6), 10**6, 4)
        assert abs(e.var() - 1) <= 0.05

    @pytest.mark.parametrize("law,param", [("student_t", 2), ("student_t", 1.5), ("pareto", 2)])
    def test_infinite_variance_rejected(self, law, param):
        with pytest.raises(InvalidArgumentError):
            gen_innovations(InnovationSpec(law, param), 10, 0)

    def test_unknown_law(self):
        with pytest.raises(InvalidArgumentError):
            InnovationSpec("cauchy")

    def test_reproducible(self):
        spec = InnovationSpec("student_t", 5)
        np.testing.assert_array_equal(gen_innovations(spec, 100, 7), gen_innovations(spec, 100, 7))

    def test_gaussian_tail_moment_matches_quadrature(self):
        from scipy import integrate, stats

        t = 1.7
        ref = 2 * integrate.quad(lambda x: x * x * stats.norm.pdf(x), t, np.inf)[0]
        assert InnovationSpec("gaussian").tail_second_moment(t) == pytest.approx(ref, rel=1e-10)

    @pytest.mark.parametrize("law,param", [("gaussian", None), ("two_point", None), ("student_t", 6)])
    def test_coupling_norm_p2(self, law, param):
        assert InnovationSpec(law, param).coupling_norm(2) == pytest.approx(math.sqrt(2))

    def test_coupling_norm_gaussian_p4(self):
        # eps - eps* ~ N(0, 2): E|Z|^4 = 3 * 4
        assert InnovationSpec("gaussian").coupling_norm(4) == pytest.approx(12 ** 0.25, rel=1e-12)


class TestCoefficients:
    def test_geometric_default_truncation(self):
        c = geometric(0.5)
        assert c.abs_tail(c.truncation + 1) < 1e-8
        assert c.abs_tail(c.truncation) >= 1e-8

    def test_polynomial_warns_for_heavy_tail(self):
        with pytest.warns(RuntimeWarning):
            polynomial(1.2)

    def test_polynomial_quiet_for_light_tail(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            polynomial(3.0)

    def test_polynomial_needs_summability(self):
        with pytest.raises(InvalidArgumentError):
            polynomial(1.0)

    def test_polynomial_tail_closed_form(self):
        c = polynomial(2.0, truncation=20_000)
        # sum_{j >= 50} (1 + j)^-2 = zeta(2, 51), from an independent implementation
        assert c.abs_tail(50) == pytest.approx(float(mpmath.zeta(2, 51)), rel=1e-12)

    def test_lag_mapping(self):
        c = as_coefficients({-1: 0.5, 1: 0.5})
        assert c[-1] == 0.5 and c[0] == 0.0 and c[1] == 0.5 and c[5] == 0.0
        assert c.truncation == 1 and not c.is_causal

    def test_dict_roundtrip(self):
        for c in (geometric(0.3, 10, two_sided=True), explicit([1.0, -0.2], first_lag=-1)):
            d = as_coefficients(c.to_dict())
            np.testing.assert_array_equal(d.values, c.values)
            assert d.first_lag == c.first_lag


class TestLinearGenerator:
    def test_white_is_innovations(self):
        m = process_from_dict({"kind": "white"})
        x = simulate(m, 500, 8).values
        np.testing.assert_array_equal(x, gen_innovations(InnovationSpec("gaussian"), 500, 8))

    def test_geometric_variance(self):
        m = LinearModel(geometric(0.5, truncation=60))
        assert m.y_variance == pytest.approx((1 - 0.25**61) / 0.75, rel=1e-12)
        x = simulate(m, 10**5, 9).values
        assert abs(x.var() - 4 / 3) <= 0.03

    def test_abs_center(self):
        m = LinearModel(explicit([1.0]), "gaussian", "abs")
        assert m.center == pytest.approx(math.sqrt(2 / math.pi), rel=1e-15)
        assert m.center_source == "exact"
        x = simulate(m, 10**5, 10).values
        assert abs(x.mean()) <= 0.01

    def test_cosine_center(self):
        m = LinearModel(explicit([1.0, 0.5]), "gaussian", "cosine")
        assert m.center == pytest.approx(math.exp(-1.25 / 2), rel=1e-15)

    def test_monte_carlo_center_is_cached(self):
        m = LinearModel(explicit([1.0]), {"law": "student_t", "param": 6}, "abs")
        c1 = m.center
        assert m.center_source == "monte-carlo"
        assert m.center is c1 or m.center == c1

    def test_two_sided_filter(self):
        m = LinearModel(explicit([0.5, 1.0, 0.25], first_lag=-1))
        path = simulate(m, 50, 11)
        k = np.arange(1, 51)
        ref = 0.5 * path.eps(k + 1) + path.eps(k) + 0.25 * path.eps(k - 1)
        np.testing.assert_allclose(path.values, ref, rtol=1e-13, atol=1e-14)

    @given(st.integers(0, 2**32), st.integers(4, 200))
    def test_reproducible(self, seed, n):
        m = process_from_dict(GEOM)
        np.testing.assert_array_equal(simulate(m, n, seed).values, simulate(m, n, seed).values)


class TestRecursions:
    def test_ar1_zero_is_innovations(self):
        m = process_from_dict({"kind": "ar1", "phi": 0.0})
        x = simulate(m, 300, 12).values
        e = gen_innovations(InnovationSpec("gaussian"), m.burn_in + 300, 12)
        np.testing.assert_array_equal(x, e[m.burn_in:])

    def test_ar1_autocorrelation(self):
        x = simulate(process_from_dict({"kind": "ar1", "phi": 0.5}), 10**5, 13).values
        assert abs(np.corrcoef(x[:-1], x[1:])[0, 1] - 0.5) <= 0.03

    def test_garch_variance(self):
        m = process_from_dict({"kind": "garch11", "omega": 0.1, "alpha": 0.05, "beta": 0.9})
        assert m.variance == pytest.approx(2.0)
        x = simulate(m, 10**6, 14).values
        assert abs(x.var() / 2.0 - 1) <= 0.10

    def test_garch_fourth_moment_flag(self):
        m = process_from_dict({"kind": "garch11", "omega": 0.1, "alpha": 0.05, "beta": 0.9})
        assert m.moment_flags["fourth"]
        heavy = process_from_dict({"kind": "garch11", "omega": 0.1, "alpha": 0.3, "beta": 0.65})
        assert not heavy.moment_flags["fourth"]

    def test_tar_regimes(self):
        m = RecursionModel("tar", {"phi_pos": 0.6, "phi_neg": -0.3})
        path = simulate(m, 100, 15)
        x = path.values
        e = path.eps(np.arange(2, 101))
        np.testing.assert_allclose(x[1:], np.where(x[:-1] > 0, 0.6, -0.3) * x[:-1] + e, atol=1e-14)

    def test_bilinear_recursion(self):
        m = RecursionModel("bilinear", {"a": 0.3, "b": 0.4})
        path = simulate(m, 100, 16)
        x, e = path.values, path.eps(np.arange(2, 101))
        np.testing.assert_allclose(x[1:], (0.3 + 0.4 * e) * x[:-1] + e, atol=1e-14)

    @pytest.mark.parametrize("spec", [
        {"kind": "ar1", "phi": 1.0},
        {"kind": "tar", "phi_pos": 0.5, "phi_neg": 1.2},
        {"kind": "garch11", "omega": 0.1, "alpha": 0.3, "beta": 0.7},
        {"kind": "bilinear", "a": 1.2, "b": 0.1},
        {"kind": "ar1"},
        {"kind": "arma", "phi": 0.1},
    ])
    def test_nonstationary_rejected(self, spec):
        with pytest.raises(InvalidArgumentError):
            process_from_dict(spec)

    def test_dict_roundtrip(self):
        for spec in ({"kind": "garch11", "omega": 0.1, "alpha": 0.05, "beta": 0.9},
                     {"kind": "linear", "coeffs": {"family": "polynomial", "kappa": 3, "truncation": 200},
                      "innovation": {"law": "student_t", "param": 8}, "transform": {"name": "softclip", "param": 2}}):
            m = process_from_dict(spec)
            again = process_from_dict(m.to_dict())
            assert again.to_dict() == m.to_dict()


class TestMApprox:
    def test_full_window_is_exact(self):
        m = LinearModel(explicit([1.0, 0.5, 0.25]))
        path = simulate(m, 64, 1)
        xm = m_approx(m, path, 2)
        np.testing.assert_allclose(xm.values, path.values, atol=1e-14)
        assert fourier_approx_gap(path.series, xm.series) == pytest.approx(0.0, abs=1e-12)

    def test_zero_window_causal(self):
        m = LinearModel(explicit([1.0, 0.5, 0.25]))
        path = simulate(m, 64, 2)
        np.testing.assert_allclose(m_approx(m, path, 0).values, path.eps(np.arange(1, 65)), atol=1e-15)

    def test_gap_one_term_difference(self):
        m = LinearModel(explicit([1.0, 0.5]))
        n = 40
        path = simulate(m, n, 3)
        k = np.arange(1, n + 1)
        d = 0.5 * path.eps(k - 1)
        w = fourier_grid(n).omegas
        ref = np.max(np.abs(np.exp(1j * np.outer(w, k)) @ d))
        assert fourier_approx_gap(path.series, m_approx(m, path, 0).series) == pytest.approx(ref, rel=1e-12)

    def test_length_mismatch(self):
        with pytest.raises(ShapeError):
            fourier_approx_gap(np.ones(10), np.ones(11))

    def test_ar1_against_closed_form(self):
        m = process_from_dict({"kind": "ar1", "phi": 0.5})
        path = simulate(m, 2000, 4)
        res = m_approx(m, path, 10, R=500, seed=5)
        rms = float(np.sqrt(np.mean((path.values - res.values) ** 2)))
        exact = 0.5**11 * math.sqrt(4 / 3)
        assert rms <= 2 * 0.5**11 / math.sqrt(1 - 0.25) * (1 + 3 * res.stderr / exact)
        assert rms == pytest.approx(exact, rel=0.1)

    def test_recursion_needs_enough_redraws(self):
        m = process_from_dict({"kind": "ar1", "phi": 0.5})
        with pytest.raises(InvalidArgumentError):
            m_approx(m, simulate(m, 16, 0), 2, R=50)

    def test_se_target_warning(self):
        m = LinearModel(geometric(0.7), "gaussian", "abs")
        path = simulate(m, 32, 6)
        res = m_approx(m, path, 1, R=5, seed=1, se_target=1e-6)
        assert res.method == "conditional-mc"
        assert res.warnings and "increase R" in res.warnings[0]

    def test_nonlinear_transform_converges_with_window(self):
        m = LinearModel(geometric(0.5), "gaussian", "softclip")
        path = simulate(m, 200, 7)
        gaps = [np.sqrt(np.mean((path.values - m_approx(m, path, mm, R=400, seed=8).values) ** 2))
                for mm in (0, 3, 8)]
        assert gaps[0] > gaps[1] > gaps[2]

    def test_identity_l2_gap_monotone(self):
        c = geometric(0.6)
        tails = [float(np.sum(c.values[np.abs(c.lags) > mm] ** 2)) for mm in range(12)]
        assert all(b <= a for a, b in zip(tails, tails[1:]))
        m = LinearModel(c)
        path = simulate(m, 20_000, 9)
        for mm in (1, 4):
            ms = np.mean((path.values - m_approx(m, path, mm).values) ** 2)
            assert ms == pytest.approx(tails[mm], rel=0.1)


class TestDependence:
    def test_linear_theta_against_exact(self):
        m = process_from_dict(GEOM)
        est = coupled_theta(m, 3, 2, 20_000, seed=1)
        assert abs(est.value - 0.125 * math.sqrt(2)) <= 3 * est.stderr
        assert coupled_theta(m, 3, exact=True).value == pytest.approx(0.17678, abs=1e-5)

    def test_theta_beyond_filter_is_zero(self):
        m = LinearModel(explicit([1.0, 0.5]))
        x, xs = coupled_pair(m, 5, 100, seed=2)
        np.testing.assert_array_equal(x, xs)
        assert coupled_theta(m, 5, 2, 100, seed=2).value == 0.0

    def test_ar1_theta(self):
        m = process_from_dict({"kind": "ar1", "phi": 0.5})
        assert coupled_theta(m, 4, exact=True).value == pytest.approx(0.0625 * math.sqrt(2))
        est = coupled_theta(m, 4, 2, 20_000, seed=3)
        assert abs(est.value - 0.0625 * math.sqrt(2)) <= 3 * est.stderr

    def test_profile_geometric_sum(self):
        prof = DependenceProfile(2.0, 0.3 * 0.5 ** np.arange(40), "exact-linear", ("geometric", 0.5))
        assert theta_tail(prof, 0) == pytest.approx(0.6, rel=1e-12)
        assert theta_tail(prof, 100) == pytest.approx(0.6 * 0.5**100, rel=1e-9)

    def test_finite_support_tail(self):
        m = LinearModel(explicit([1.0, 0.4, 0.2]))
        prof = dependence_profile(m)
        assert theta_tail(prof, 3) == 0.0
        assert theta_tail(prof, 2) == pytest.approx(0.2 * math.sqrt(2))

    def test_untagged_profile(self):
        prof = DependenceProfile(2.0, np.array([1.0, 0.5]), "monte-carlo", None)
        with pytest.raises(InsufficientProfileError):
            theta_tail(prof, 5)

    def test_polynomial_tail_log_rate(self):
        m = LinearModel(polynomial(2.0, truncation=20_000))
        prof = dependence_profile(m)
        vals = [theta_tail(prof, n) * math.log(n) for n in (100, 1000, 10_000)]
        assert vals[0] > vals[1] > vals[2] > 0
        direct = math.sqrt(2) * float(mpmath.zeta(2, 1001))
        assert theta_tail(prof, 1000) == pytest.approx(direct, rel=1e-12)

    @given(st.floats(0.05, 0.95), st.integers(0, 60))
    def test_tail_nonincreasing(self, rho, n):
        prof = dependence_profile(LinearModel(geometric(rho)))
        assert theta_tail(prof, n + 1) <= theta_tail(prof, n)
        assert np.all(prof.theta >= 0)

    def test_covariance_bound_closed_form(self):
        m = process_from_dict(GEOM)
        prof = dependence_profile(m)
        dens = linear_spectral_density(m.coeffs)
        for u in range(51):
            assert abs(dens.autocov(u)) <= covariance_bound(prof, u) * (1 + 1e-12)

    def test_two_sided_fold(self):
        m = LinearModel(explicit([0.5, 1.0, 0.25], first_lag=-1))
        prof = dependence_profile(m)
        np.testing.assert_allclose(prof.theta, math.sqrt(2) * np.array([1.0, 0.75]))

    def test_garch_profile_decays(self):
        m = process_from_dict({"kind": "garch11", "omega": 0.1, "alpha": 0.05, "beta": 0.9, "burn_in": 200})
        prof = dependence_profile(m, K=8, reps=2000, seed=4)
        assert prof.source == "monte-carlo"
        assert prof.tail[0] == "geometric" and 0 < prof.tail[1] < 1
        assert prof.theta[8] < prof.theta[0]


class TestConditions:
    def test_geometric_passes(self):
        rep = check_conditions(process_from_dict(GEOM))
        assert rep.passed
        for name in ("a3", "a4", "theta"):
            assert decreasing_to_zero(rep.row(name).values)

    def test_two_point_passes(self):
        rep = check_conditions(process_from_dict({**GEOM, "innovation": "two_point"}))
        assert rep.passed
        assert rep.row("a4").values[1:] == (0.0, 0.0, 0.0)

    def test_pareto_boundary_fails_a4(self):
        rep = check_conditions(process_from_dict({**GEOM, "innovation": {"law": "pareto", "param": 2}}))
        assert not rep.row("a4").passed
        assert rep.row("a3").passed

    def test_zero_spectrum_flagged(self):
        rep = check_conditions(LinearModel(explicit([0.5, 0.0, 0.5], first_lag=-1)))
        assert not rep.row("c1").passed

    def test_nonlinear_transform_row(self):
        rep = check_conditions(LinearModel(geometric(0.5), "gaussian", "softclip"), reps=500)
        assert rep.row("a4_strong").passed
        assert rep.passed

    def test_recursion_flags(self):
        m = process_from_dict({"kind": "garch11", "omega": 0.1, "alpha": 0.05, "beta": 0.9, "burn_in": 200})
        rep = check_conditions(m, reps=500)
        assert rep.flags["moment_fourth"]
        assert rep.row("c1").passed

    def test_decreasing_helper(self):
        assert decreasing_to_zero([3.0, 2.0, 0.0])
        assert not decreasing_to_zero([1.0, 2.0, 0.5])
        assert not decreasing_to_zero([1.0, 1.0, 1.0])
        assert not decreasing_to_zero([math.inf, 1.0])


def test_spectral_density_availability():
    assert spectral_density(process_from_dict({"kind": "ar1", "phi": 0.5}))(0.0) == pytest.approx(2 / math.pi)
    with pytest.raises(InvalidArgumentError):
        spectral_density(process_from_dict({"kind": "tar", "phi_pos": 0.5, "phi_neg": 0.2}))
