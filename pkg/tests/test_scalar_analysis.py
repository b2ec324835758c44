import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from esbgk_entropy import scalar_analysis as sa
from esbgk_entropy.errors import BracketFailure, DomainError
from esbgk_entropy.scalar_analysis import (
    Maximizer,
    PrandtlParam,
    closed_bound,
    compute_cnu,
    derivative_ratio,
    derivative_ratio_slope,
    g1,
    g1_prime,
    g2,
    g2_prime,
    g_ratio,
    legacy_bound,
    stationarity,
    verify_product_inequality,
    x_star,
)

mp.mp.dps = 50


def g1_mp(nu, x):
    nu, x = mp.mpf(nu), mp.mpf(x)
    return (
        3 * mp.log(1 + x / 3)
        - mp.log(1 + (1 + 2 * nu) * x / 3)
        - 2 * mp.log(1 + (1 - nu) * x / 3)
    )


def g2_mp(x):
    x = mp.mpf(x)
    return 3 * mp.log(1 + x / 3) - mp.log(1 + x)


NUS = [-0.5, -0.45, -0.3, -0.1, 0.2, 0.5, 0.75, 0.95]
XS = np.logspace(-3, 3, 25)


class TestPrandtlParam:
    @pytest.mark.parametrize("nu", [-0.5, 0.0, 0.999])
    def test_accepts_range(self, nu):
        assert PrandtlParam(nu).nu == nu

    @pytest.mark.parametrize("nu", [-0.5000001, 1.0, 2.0, float("nan")])
    def test_rejects_outside(self, nu):
        with pytest.raises(DomainError):
            PrandtlParam(nu)

    def test_rejects_negative_exponents(self):
        with pytest.raises(DomainError):
            PrandtlParam(0.1, alpha=-1)
        with pytest.raises(DomainError):
            PrandtlParam(0.1, beta=-0.5)

    def test_collision_frequency(self):
        p = PrandtlParam(-0.5, alpha=1.0, beta=0.5)
        assert p.collision_frequency(2.0, 4.0) == pytest.approx(2.0 * 2.0 / 1.5)


class TestG1G2:
    def test_g1_vanishes_at_nu_zero(self):
        assert g1(0.0, 5.0) == 0.0

    def test_g1_critical_value(self):
        assert g1(-0.5, 3.0) == pytest.approx(3 * math.log(2) - 2 * math.log(2.5), rel=1e-14)
        assert g1(-0.5, 3.0) == pytest.approx(0.246860, abs=1e-6)

    def test_g1_small_x_series(self):
        assert g1(0.5, 1e-4) / 1e-8 == pytest.approx(1 / 12, rel=1e-4)

    def test_g2_values(self):
        assert g2(3.0) == pytest.approx(math.log(2), rel=1e-15)
        assert g2(0.0) == 0.0
        assert g2(1e-4) / 1e-8 == pytest.approx(1 / 3, rel=1e-4)

    @pytest.mark.parametrize("nu", NUS)
    def test_g1_matches_three_log_form(self, nu):
        got = np.asarray(g1(nu, XS))
        want = np.array([float(g1_mp(nu, x)) for x in XS])
        np.testing.assert_allclose(got, want, rtol=1e-12)

    def test_g2_matches_three_log_form(self):
        got = np.asarray(g2(XS))
        want = np.array([float(g2_mp(x)) for x in XS])
        np.testing.assert_allclose(got, want, rtol=1e-13)

    def test_g2_huge_x(self):
        for x in (1e99, 1e101, 1e160, 1e300):
            assert g2(x) == pytest.approx(float(g2_mp(x)), rel=1e-13)

    def test_tiny_x_keeps_relative_accuracy(self):
        for x in (1e-7, 1e-5):
            assert g1(0.5, x) == pytest.approx(float(g1_mp(0.5, x)), rel=1e-10)
            assert g2(x) == pytest.approx(float(g2_mp(x)), rel=1e-10)

    def test_negative_x_rejected(self):
        with pytest.raises(DomainError):
            g2(-1.0)

    @given(st.floats(-0.5, 0.999), st.floats(1e-6, 1e8))
    def test_g1_nonnegative_g2_positive(self, nu, x):
        assert g1(nu, x) >= 0
        assert g2(x) > 0


class TestRatio:
    def test_critical_value(self):
        assert g_ratio(-0.5, 3.0) == pytest.approx(0.356144, abs=1e-6)
        assert g_ratio(-0.5, 3.0) == pytest.approx(
            float(g1_mp(-0.5, 3) / g2_mp(3)), rel=1e-14
        )

    def test_small_x_limit_is_nu_squared(self):
        assert g_ratio(0.5, 1e-6) == pytest.approx(0.25, rel=1e-5)

    def test_zero_nu(self):
        assert g_ratio(0.0, 7.0) == 0.0
        assert np.all(g_ratio(0.0, XS) == 0.0)

    @pytest.mark.xfail(
        strict=True,
        reason="decay is only logarithmic: g_ratio ~ g1(inf) / (2 ln x), still 8-25% of C_nu at 1e8",
    )
    @pytest.mark.parametrize("nu", [-0.49, -0.3, 0.2, 0.5, 0.9])
    def test_vanishes_by_1e8(self, nu):
        assert g_ratio(nu, 1e8) < 1e-2 * compute_cnu(nu).value

    @pytest.mark.parametrize("nu", [-0.49, -0.3, -0.05, 0.2, 0.5, 0.9, 0.99])
    def test_vanishes_at_infinity(self, nu):
        c = compute_cnu(nu).value
        assert g_ratio(nu, 1e300) < 1e-2 * c
        # the tail follows g1(inf) / g2(x)
        g1_inf = -math.log1p(-nu * nu * (3 - 2 * nu))
        for x in (1e8, 1e50, 1e200):
            assert g_ratio(nu, x) == pytest.approx(g1_inf / g2(x), rel=1e-5)
        xs = np.logspace(math.log10(compute_cnu(nu).x_nu) + 0.01, 300, 200)
        assert np.all(np.diff(g_ratio(nu, xs)) < 0)

    def test_critical_ratio_increasing_to_half(self):
        xs = np.logspace(-3, 10, 400)
        r = np.asarray(g_ratio(-0.5, xs))
        assert np.all(np.diff(r) > 0)
        assert r[-1] < 0.5


class TestDerivatives:
    @pytest.mark.parametrize("nu", NUS)
    def test_g1_prime_matches_finite_difference(self, nu):
        for x in XS:
            fd = mp.diff(lambda t: g1_mp(nu, t), mp.mpf(x))
            assert g1_prime(nu, x) == pytest.approx(float(fd), rel=1e-6)

    def test_g2_prime_matches_finite_difference(self):
        for x in XS:
            fd = mp.diff(g2_mp, mp.mpf(x))
            assert g2_prime(x) == pytest.approx(float(fd), rel=1e-6)

    def test_five_point_stencil(self):
        # plain double-precision stencil as a second, cruder oracle
        for x in XS:
            h = 1e-3 * x
            fd = (-g2(x + 2 * h) + 8 * g2(x + h) - 8 * g2(x - h) + g2(x - 2 * h)) / (12 * h)
            assert g2_prime(x) == pytest.approx(fd, rel=1e-6)
            fd1 = (
                -g1(0.3, x + 2 * h) + 8 * g1(0.3, x + h) - 8 * g1(0.3, x - h) + g1(0.3, x - 2 * h)
            ) / (12 * h)
            assert g1_prime(0.3, x) == pytest.approx(fd1, rel=1e-6)

    def test_examples(self):
        assert g2_prime(3.0) == pytest.approx(0.25, rel=1e-15)
        assert g1_prime(0.0, 0.0) == 0.0
        # (2 nu^2 x / 3) / ((1 + x/3)(1 + 0)(1 + x/2)) = (1/3) / ((5/3) * 2)
        want = Fraction(1, 3) / (Fraction(5, 3) * 1 * 2)
        assert want == Fraction(1, 10)
        assert g1_prime(-0.5, 2.0) == pytest.approx(float(want), rel=1e-15)

    @pytest.mark.parametrize("nu", NUS)
    def test_derivative_ratio_is_quotient(self, nu):
        q = np.asarray(g1_prime(nu, XS)) / np.asarray(g2_prime(XS))
        np.testing.assert_allclose(derivative_ratio(nu, XS), q, rtol=1e-12)

    def test_derivative_ratio_values(self):
        # nu = 1/2: (1 + 2nu)/3 = 2/3 and (1 - nu)/3 = 1/6
        want = Fraction(1, 4) * 2 / (Fraction(5, 3) * Fraction(7, 6))
        assert derivative_ratio(0.5, 1.0) == pytest.approx(float(want), rel=1e-15)
        assert derivative_ratio(0.5, 1.0) == pytest.approx(0.257143, abs=1e-6)
        assert derivative_ratio(-0.5, 1e12) == pytest.approx(0.5, rel=1e-9)
        assert derivative_ratio(0.7, 1e-12) == pytest.approx(0.49, rel=1e-9)

    def test_critical_slope_closed_form(self):
        xs = np.linspace(0.1, 50, 30)
        np.testing.assert_allclose(
            derivative_ratio_slope(-0.5, xs), 1 / (8 * (1 + xs / 2) ** 2), rtol=1e-13
        )

    @pytest.mark.parametrize("nu", NUS)
    def test_slope_matches_finite_difference(self, nu):
        for x in XS:
            h = 1e-4 * x
            fd = (derivative_ratio(nu, x + h) - derivative_ratio(nu, x - h)) / (2 * h)
            assert derivative_ratio_slope(nu, x) == pytest.approx(fd, rel=1e-5, abs=1e-14)


class TestXStar:
    def test_values(self):
        assert x_star(0.5) == pytest.approx(math.sqrt(2.5) - 1)
        assert x_star(0.5) == pytest.approx(0.581139, abs=1e-6)
        assert x_star(-0.4) == pytest.approx(3.0, rel=1e-14)
        assert x_star(0.999999) == pytest.approx(math.sqrt(2) - 1, abs=1e-6)

    @pytest.mark.parametrize("nu", [0.0, -0.5])
    def test_domain(self, nu):
        with pytest.raises(DomainError):
            x_star(nu)

    @pytest.mark.parametrize("nu", [-0.45, -0.2, 0.1, 0.5, 0.9])
    def test_sign_change_of_slope(self, nu):
        xs_ = x_star(nu)
        left = np.linspace(1e-3, xs_ * 0.999, 50)
        right = np.linspace(xs_ * 1.001, xs_ * 100, 50)
        assert np.all(np.asarray(derivative_ratio_slope(nu, left)) > 0)
        assert np.all(np.asarray(derivative_ratio_slope(nu, right)) < 0)


class TestComputeCnu:
    def test_special_values(self):
        r0 = compute_cnu(0.0)
        assert r0.value == 0.0 and r0.maximizer is Maximizer.ZERO and r0.x_nu is None
        rc = compute_cnu(-0.5)
        assert rc.value == 0.5 and rc.maximizer is Maximizer.AT_INFINITY

    def test_accepts_param_object(self):
        assert compute_cnu(PrandtlParam(0.5)).value == compute_cnu(0.5).value

    def test_half(self):
        r = compute_cnu(0.5)
        assert r.maximizer is Maximizer.INTERIOR
        assert 0.25 <= r.value <= 1 / 3
        assert r.x_nu > x_star(0.5)
        assert abs(r.residual) < 1e-12
        # dense grid oracle, independent of the root finder
        xs = np.logspace(-4, 4, 200_001)
        assert r.value >= np.max(g_ratio(0.5, xs)) - 1e-12
        assert r.value == pytest.approx(np.max(g_ratio(0.5, xs)), abs=1e-10)

    @pytest.mark.parametrize("nu", [-0.45, -0.2, 0.1, 0.5, 0.9])
    def test_maximum_matches_mpmath(self, nu):
        r = compute_cnu(nu)
        f = lambda t: g1_mp(nu, t) / g2_mp(t)  # noqa: E731
        x_hi = mp.findroot(lambda t: mp.diff(f, t), r.x_nu)
        assert r.x_nu == pytest.approx(float(x_hi), rel=1e-9)
        assert r.value == pytest.approx(float(f(x_hi)), rel=1e-12)

    @pytest.mark.parametrize("nu", [-0.45, -0.2, 0.1, 0.5, 0.9])
    def test_stationarity_sign_pattern(self, nu):
        r = compute_cnu(nu)
        left = np.logspace(-4, math.log10(r.x_nu) - 1e-3, 60)
        right = np.logspace(math.log10(r.x_nu) + 1e-3, 9, 60)
        assert np.all(np.asarray(stationarity(nu, left)) > 0)
        assert np.all(np.asarray(stationarity(nu, right)) < 0)
        assert abs(stationarity(nu, r.x_nu)) < 1e-12

    def test_bracket_failure(self, monkeypatch):
        monkeypatch.setattr(sa, "_X_BRACKET_LIMIT", 1.0)
        with pytest.raises(BracketFailure):
            compute_cnu(-0.49)

    def test_tol_must_be_positive(self):
        with pytest.raises(DomainError):
            compute_cnu(0.3, tol=0)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(-0.5, 0.999))
    def test_bound_chain(self, nu):
        r = compute_cnu(nu)
        assert 0 <= r.value < 1
        assert r.value <= r.closed_bound + 1e-9
        assert r.closed_bound <= r.legacy_bound + 1e-9
        if r.maximizer is Maximizer.INTERIOR:
            assert r.value >= nu * nu - 1e-15
        tag = {0.0: Maximizer.ZERO, -0.5: Maximizer.AT_INFINITY}.get(nu, Maximizer.INTERIOR)
        assert r.maximizer is tag

    def test_sweep_1000(self):
        nus = np.linspace(-0.5, 0.999, 1000)
        vals = np.array([compute_cnu(nu).value for nu in nus])
        cb = np.array([closed_bound(nu) for nu in nus])
        lb = np.array([legacy_bound(nu) for nu in nus])
        assert np.all(vals >= 0)
        assert np.all(vals <= cb + 1e-9)
        assert np.all(cb <= lb + 1e-9)


class TestBounds:
    def test_values(self):
        assert closed_bound(-0.5) == 0.5 and legacy_bound(-0.5) == 1.0
        assert closed_bound(0.0) == 0.0 and legacy_bound(0.0) == 0.0
        assert closed_bound(0.5) == pytest.approx(1 / 3) and legacy_bound(0.5) == 0.5

    def test_closed_bound_below_one(self):
        nus = np.linspace(-0.5, 0.999999, 10_001)
        assert max(closed_bound(nu) for nu in nus) < 1


class TestProductInequality:
    def test_zero_nu_exact(self):
        rep = verify_product_inequality(0.0, np.logspace(-3, 6, 200))
        assert np.all(rep.margin == 0.0)
        assert rep.passed()

    def test_positive_margins(self):
        rep = verify_product_inequality(0.7, [0.1, 1, 10, 100])
        assert np.all(rep.margin > 0)
        assert rep.min_margin > 0
        assert rep.argmin_x in (0.1, 1, 10, 100)

    def test_critical_ratio_gap_closes(self):
        xs = np.logspace(0, 12, 13)
        rep = verify_product_inequality(-0.5, xs)
        assert rep.passed()
        gap = rep.ratio_gap
        assert np.all(gap > 0) and np.all(np.diff(gap) < 0)
        assert gap[-1] < 0.03

    def test_rejects_bad_xs(self):
        with pytest.raises(DomainError):
            verify_product_inequality(0.2, [])
        with pytest.raises(DomainError):
            verify_product_inequality(0.2, [1.0, -1.0])
