"""Box-product algebra, radicand and regime classification."""

import math

import numpy as np
import pytest

from critsense import (
    Regime,
    boxdot,
    boxtimes,
    casimir_radicand,
    classify_regime,
    regime_of,
    vector3,
)
from critsense.models import QrmParameters, qrm_effective

RNG = np.random.default_rng(20240801)


def vec(*components):
    return np.array(components, dtype=float)


class TestBoxdot:
    def test_spacelike_unit(self):
        assert boxdot(vec(1, 0, 0), vec(1, 0, 0)) == 1.0

    def test_minkowski_signature(self):
        assert boxdot(vec(0, 0, 1), vec(0, 0, 1)) == -1.0

    def test_qrm_critical_value(self):
        # r and rdot of the isotropic Rabi model at its critical coupling
        assert boxdot(vec(-1, 0, 1), vec(-2, 0, -2)) == 4.0

    def test_symmetric(self):
        for _ in range(200):
            a, b = RNG.uniform(-3, 3, (2, 3))
            assert boxdot(a, b) == pytest.approx(boxdot(b, a), rel=1e-14)


class TestBoxtimes:
    def test_xy_gives_minus_z(self):
        np.testing.assert_allclose(boxtimes(vec(1, 0, 0), vec(0, 1, 0)), vec(0, 0, -1))

    def test_self_product_vanishes(self):
        np.testing.assert_allclose(boxtimes(vec(3, -2, 5), vec(3, -2, 5)), np.zeros(3))

    def test_qrm_critical_pair(self):
        np.testing.assert_allclose(
            boxtimes(vec(-1, 0, 1), vec(-2, 0, -2)), vec(0, -4, 0)
        )

    def test_antisymmetric(self):
        for _ in range(200):
            a, b = RNG.uniform(-3, 3, (2, 3))
            np.testing.assert_allclose(boxtimes(a, b), -boxtimes(b, a), atol=1e-14)

    def test_lagrange_formula(self):
        # a x (b x c) = -(a . c) b + (a . b) c, 1000 random triples
        worst = 0.0
        for _ in range(1000):
            a, b, c = RNG.uniform(-2, 2, (3, 3))
            lhs = boxtimes(a, boxtimes(b, c))
            rhs = -boxdot(a, c) * b + boxdot(a, b) * c
            scale = max(1.0, np.max(np.abs(lhs)), np.max(np.abs(rhs)))
            worst = max(worst, np.max(np.abs(lhs - rhs)) / scale)
        assert worst <= 1e-12

    def test_bilinear(self):
        for _ in range(200):
            a, b, c = RNG.uniform(-2, 2, (3, 3))
            lam = RNG.uniform(-2, 2)
            np.testing.assert_allclose(
                boxtimes(a + lam * b, c),
                boxtimes(a, c) + lam * boxtimes(b, c),
                atol=1e-12,
            )


class TestRadicand:
    def test_unit(self):
        assert casimir_radicand(vec(1, 0, 0)) == 1.0

    def test_qrm_below_critical(self):
        model = qrm_effective(QrmParameters(omega=1.0, zeta=1.0))
        s = casimir_radicand(model.r(0.9))
        assert s == pytest.approx(-0.76, rel=1e-14)
        assert s == pytest.approx(-4 * (1 - 0.81), rel=1e-14)

    def test_qrm_critical_zero(self):
        for zeta in (0.5, 1.0, 2.0):
            p = QrmParameters(omega=1.0, zeta=zeta)
            model = qrm_effective(p)
            assert abs(casimir_radicand(model.r(p.critical_coupling))) <= 1e-12

    def test_half_derivative_of_radicand(self):
        # boxdot(r, rdot) equals d(s)/dlam / 2, checked by centered difference
        model = qrm_effective(QrmParameters(omega=1.0, zeta=1.0))
        for lam in RNG.uniform(0.2, 1.4, 25):
            step = 1e-6
            fd = (
                casimir_radicand(model.r(lam + step))
                - casimir_radicand(model.r(lam - step))
            ) / (2 * step)
            exact = boxdot(model.r(lam), model.rdot(lam))
            assert exact == pytest.approx(fd / 2, rel=1e-6)


class TestClassifyRegime:
    def test_trigonometric_with_period(self):
        info = classify_regime(-0.76, scale=1.0, eps=1e-12)
        assert info.regime is Regime.TRIGONOMETRIC
        assert info.modulus == pytest.approx(math.sqrt(0.76), rel=1e-15)
        assert info.period == pytest.approx(2 * math.pi / math.sqrt(0.76), rel=1e-15)
        # the cycloid period pi / sqrt(1 - 0.81) in mode-frequency units
        assert info.period == pytest.approx(math.pi / math.sqrt(0.19), rel=1e-14)
        assert info.period * info.modulus == pytest.approx(2 * math.pi, rel=1e-15)

    def test_critical_has_no_period(self):
        info = classify_regime(0.0)
        assert info.regime is Regime.CRITICAL
        assert info.period is None

    def test_hyperbolic(self):
        info = classify_regime(4.0, scale=1.0)
        assert info.regime is Regime.HYPERBOLIC
        assert info.modulus == 2.0
        assert info.period is None

    def test_band_is_relative_to_scale(self):
        assert classify_regime(1e-9, scale=1e5, eps=1e-12).regime is Regime.CRITICAL
        assert classify_regime(1e-9, scale=1.0, eps=1e-12).regime is Regime.HYPERBOLIC

    def test_rejects_bad_scale_and_eps(self):
        with pytest.raises(ValueError):
            classify_regime(1.0, scale=0.0)
        with pytest.raises(ValueError):
            classify_regime(1.0, eps=-1e-3)

    def test_regime_of_uses_euclidean_scale(self):
        model = qrm_effective(QrmParameters(omega=1.0, zeta=1.0))
        info = regime_of(model.r(1.0))
        assert info.regime is Regime.CRITICAL


class TestVector3:
    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            vector3(1.0, float("nan"), 0.0)
        with pytest.raises(ValueError):
            vector3(float("inf"), 0.0, 0.0)

    def test_builds_float_array(self):
        v = vector3(1, 2, 3)
        assert v.dtype == float
        np.testing.assert_allclose(v, vec(1, 2, 3))
