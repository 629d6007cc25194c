"""Closed-form QFI, six-part decomposition, asymptotics, bounds, fits."""

import math

import numpy as np
import pytest

from critsense import (
    AptParameters,
    LmgParameters,
    QrmParameters,
    apt,
    asymptotic_coefficients,
    build_state,
    canonical_probe,
    crb,
    fit_power_law,
    lmg,
    one_mode_K,
    qfi_closed_form,
    qrm_asymptotic_factor,
    qrm_critical_coefficients,
    qrm_effective,
    scalar_profiles,
    two_mode_K,
)
from critsense.fock import FockRepresentation
from critsense.qfi import PART_KEYS


@pytest.fixture(scope="module")
def qrm_iso():
    return qrm_effective(QrmParameters(omega=1.0, zeta=1.0))


@pytest.fixture(scope="module")
def rep16():
    return one_mode_K(16)


class TestClosedForm:
    def test_critical_point_default(self, qrm_iso, rep16):
        probe = canonical_probe(rep16)
        for t in (0.5, 1.0, 2.0):
            report = qfi_closed_form(qrm_iso, 1.0, t, probe, rep16)
            expected = 5 * t**2 + 2 * t**4 + (5 / 9) * t**6
            assert report.total == pytest.approx(expected, rel=1e-12)
            assert not report.compat_mode

    def test_critical_point_compat(self, qrm_iso, rep16):
        probe = canonical_probe(rep16)
        for t in (0.5, 1.0, 2.0):
            report = qfi_closed_form(qrm_iso, 1.0, t, probe, rep16, compat=True)
            assert report.total == pytest.approx(5 * t**2 + 4 * t**4, rel=1e-12)
            assert report.compat_mode

    def test_compat_only_bites_at_critical(self, qrm_iso, rep16):
        probe = canonical_probe(rep16)
        a = qfi_closed_form(qrm_iso, 0.9, 1.5, probe, rep16, compat=False)
        b = qfi_closed_form(qrm_iso, 0.9, 1.5, probe, rep16, compat=True)
        assert a.total == b.total

    def test_zero_time(self, qrm_iso, rep16):
        report = qfi_closed_form(qrm_iso, 0.9, 0.0, canonical_probe(rep16), rep16)
        assert report.total == 0.0
        assert report.crb is None

    def test_parts_ordering_and_sum(self, qrm_iso, rep16):
        report = qfi_closed_form(qrm_iso, 0.9, 2.3, canonical_probe(rep16), rep16)
        assert tuple(report.parts) == PART_KEYS
        assert report.total == pytest.approx(4 * sum(report.parts.values()), rel=1e-14)
        assert report.total >= 0
        assert report.crb == pytest.approx(1 / math.sqrt(report.total), rel=1e-14)

    def test_parts_match_cycloid_coordinate_form(self, qrm_iso, rep16):
        # In the trigonometric regime the parts equal the conventional
        # decomposition written with x = |r|t - sin, y = 1 - cos, z = |r|t
        # and signed powers of the modulus.
        from critsense import moments

        probe = canonical_probe(rep16)
        lam, t = 0.9, 1.7
        report = qfi_closed_form(qrm_iso, lam, t, probe, rep16)
        from critsense import casimir_radicand, h_vectors

        dec = h_vectors(qrm_iso.r(lam), qrm_iso.rdot(lam))
        w = math.sqrt(abs(dec.s))
        x = w * t - math.sin(w * t)
        y = 1 - math.cos(w * t)
        z = w * t
        hx = rep16.operator(dec.b_x)
        hy = rep16.operator(dec.b_y)
        hz = rep16.operator(dec.b_z)
        m_xy = moments(hx, hy, probe)
        m_xz = moments(hx, hz, probe)
        m_yz = moments(hy, hz, probe)
        f1 = z**2 * m_yz.var_b / w**2
        f2 = -2 * y * z * m_yz.cov / w**3
        f3 = 2 * x * z * m_xz.cov / w**4
        f4 = y**2 * m_xy.var_b / w**4
        f5 = -2 * x * y * m_xy.cov / w**5
        f6 = x**2 * m_xy.var_a / w**6
        for key, value in zip(PART_KEYS, (f1, f2, f3, f4, f5, f6)):
            assert report.parts[key] == pytest.approx(value, rel=1e-12, abs=1e-13)

    def test_rejects_negative_time(self, qrm_iso, rep16):
        with pytest.raises(ValueError):
            qfi_closed_form(qrm_iso, 0.9, -1.0, canonical_probe(rep16), rep16)

    def test_shift_invariance(self, qrm_iso, rep16):
        # adding c * identity to every generator changes nothing
        probe = canonical_probe(rep16)
        base = qfi_closed_form(qrm_iso, 0.9, 2.0, probe, rep16)
        eye = np.eye(rep16.dim)
        shifted = FockRepresentation(
            1, rep16.cutoff, rep16.kx + 0.7 * eye, rep16.ky + 0.7 * eye, rep16.kz + 0.7 * eye
        )
        report = qfi_closed_form(qrm_iso, 0.9, 2.0, probe, shifted)
        assert report.total == pytest.approx(base.total, abs=1e-10 * max(1, base.total))
        for key in PART_KEYS:
            assert report.parts[key] == pytest.approx(
                base.parts[key], abs=1e-10 * max(1.0, abs(base.parts[key]))
            )

    def test_near_critical_six_term_polynomial(self, qrm_iso, rep16):
        probe = canonical_probe(rep16)
        coef = asymptotic_coefficients(qrm_iso, probe, rep16)
        lam = 1 - 1e-8
        for t in (1.0, 2.0, 3.0, 4.0, 5.0):
            poly = (
                coef.a_xx * t**6
                + coef.a_yy * t**4
                + coef.a_zz * t**2
                + coef.a_xy * t**5
                + coef.a_xz * t**4
                + coef.a_yz * t**3
            )
            closed = qfi_closed_form(qrm_iso, lam, t, probe, rep16).total
            assert closed == pytest.approx(poly, rel=1e-4)

    def test_coefficient_periodicity(self):
        # f_y repeats with the cycloid period for the coupling-0.9 radicand
        s = -0.76
        tau = 2 * math.pi / math.sqrt(abs(s))
        assert tau == pytest.approx(math.pi / math.sqrt(1 - 0.81), rel=1e-14)
        for t in np.linspace(0.0, 2 * tau, 37):
            fy = scalar_profiles(s, t).f_y
            fy_shift = scalar_profiles(s, t + tau).f_y
            assert fy_shift == pytest.approx(fy, abs=1e-12 * max(1, fy))


class TestAsymptoticCoefficients:
    def test_qrm_isotropic(self, qrm_iso, rep16):
        coef = asymptotic_coefficients(qrm_iso, canonical_probe(rep16), rep16)
        assert coef.a_xx == pytest.approx(5 / 9, rel=1e-12)
        assert coef.a_yy == pytest.approx(4.0, rel=1e-12)
        assert coef.a_zz == pytest.approx(5.0, rel=1e-12)
        assert coef.a_xy == pytest.approx(0.0, abs=1e-12)
        assert coef.a_xz == pytest.approx(-2.0, rel=1e-12)
        assert coef.a_yz == pytest.approx(0.0, abs=1e-12)
        assert coef.b_yy == pytest.approx(4.0, rel=1e-12)
        assert coef.b_zz == pytest.approx(5.0, rel=1e-12)
        assert coef.b_yz == pytest.approx(0.0, abs=1e-12)

    def test_apt_two_mode_vacuum(self):
        for delta in (1.0, 1.3):
            model = apt(AptParameters(delta=delta, estimand="kappa"))
            rep = two_mode_K(8)
            probe = build_state("vacuum", rep)
            coef = asymptotic_coefficients(model, probe, rep)
            assert coef.a_xx == pytest.approx((16 / 9) * delta**4, rel=1e-12)

    def test_lmg_vacuum(self):
        model = lmg(LmgParameters(gamma=0.0))
        rep = one_mode_K(10)
        probe = build_state("vacuum", rep)
        coef = asymptotic_coefficients(model, probe, rep)
        assert coef.a_xx == pytest.approx(1 / 18, rel=1e-12)

    def test_variance_coefficients_nonnegative(self, qrm_iso, rep16):
        coef = asymptotic_coefficients(qrm_iso, canonical_probe(rep16), rep16)
        assert coef.a_xx >= 0 and coef.a_yy >= 0 and coef.a_zz >= 0

    def test_requires_critical_set(self, rep16):
        from critsense.models import ModelSpec
        from critsense import vector3

        model = ModelSpec(
            name="flat",
            estimand="x",
            r_of=lambda lam: vector3(1.0, 0.0, 0.0),
            rdot_of=lambda lam: vector3(0.0, 0.0, 0.0),
            critical_values=(),
            representation="one-mode",
        )
        with pytest.raises(ValueError):
            asymptotic_coefficients(model, canonical_probe(rep16), rep16)


class TestClosedFactors:
    def test_isotropic_value(self):
        assert qrm_asymptotic_factor(1.0, 1.0) == 5 / 9

    def test_anisotropic_maximum(self):
        assert qrm_asymptotic_factor(2.0, 1.0) == pytest.approx(5120 / 6561, rel=1e-15)
        grid = np.arange(0.05, 6.0001, 0.05)
        values = [qrm_asymptotic_factor(z) for z in grid]
        assert grid[int(np.argmax(values))] == pytest.approx(2.0, abs=0.051)

    def test_jaynes_cummings_limit(self):
        assert qrm_asymptotic_factor(0.0, 1.0) == 0.0

    def test_omega_scaling(self):
        assert qrm_asymptotic_factor(1.3, 2.0) == pytest.approx(
            64 * qrm_asymptotic_factor(1.3, 1.0), rel=1e-13
        )

    def test_critical_coefficients(self):
        assert qrm_critical_coefficients(1.0, 1.0) == (4.0, 5.0)
        assert qrm_critical_coefficients(0.0, 1.0) == (0.0, 1.0)
        b1a, b2a = qrm_critical_coefficients(1.7, 1.0)
        b1b, b2b = qrm_critical_coefficients(1.7, 3.0)
        assert b1b == pytest.approx(81 * b1a, rel=1e-13)
        assert b2b == pytest.approx(9 * b2a, rel=1e-13)

    def test_factor_matches_general_machinery(self):
        # the closed factor equals Var[hx]/9 with the canonical probe
        for zeta in (0.5, 1.0, 2.0, 3.5):
            model = qrm_effective(QrmParameters(omega=1.0, zeta=zeta))
            rep = one_mode_K(12)
            coef = asymptotic_coefficients(model, canonical_probe(rep), rep)
            assert coef.a_xx == pytest.approx(qrm_asymptotic_factor(zeta), rel=1e-12)


class TestCrb:
    def test_values(self):
        assert crb(100.0) == pytest.approx(0.1)
        assert crb(9.0) == pytest.approx(1 / 3)

    def test_measurement_scaling(self):
        assert crb(50.0, nu=4) == pytest.approx(crb(50.0) / 2)

    def test_errors(self):
        with pytest.raises(ValueError):
            crb(0.0)
        with pytest.raises(ValueError):
            crb(-1.0)
        with pytest.raises(ValueError):
            crb(1.0, nu=0)


class TestFitPowerLaw:
    def test_exact_sixth_power(self):
        t = np.linspace(1, 5, 9)
        exponent, prefactor, residual = fit_power_law(t, t**6)
        assert exponent == pytest.approx(6.0, abs=1e-12)
        assert prefactor == pytest.approx(1.0, rel=1e-12)
        assert residual <= 1e-12

    def test_scaled_quartic(self):
        t = np.geomspace(0.5, 8, 12)
        exponent, prefactor, residual = fit_power_law(t, 2 * t**4)
        assert exponent == pytest.approx(4.0, abs=1e-12)
        assert prefactor == pytest.approx(2.0, rel=1e-12)

    def test_rejects_bad_data(self):
        with pytest.raises(ValueError):
            fit_power_law([1, 2], [1, 2])
        with pytest.raises(ValueError):
            fit_power_law([1, 2, 3], [1, -2, 3])
        with pytest.raises(ValueError):
            fit_power_law([0, 2, 3], [1, 2, 3])


class TestMonotoneEnhancement:
    @pytest.mark.parametrize("zeta", [0.5, 1.0, 2.0])
    def test_bound_decreases_toward_critical(self, zeta):
        p = QrmParameters(omega=1.0, zeta=zeta)
        model = qrm_effective(p)
        rep = one_mode_K(16)
        probe = canonical_probe(rep)
        gc = p.critical_coupling
        grid = np.linspace(0.1 * gc, 0.9 * gc, 9)
        bounds = [qfi_closed_form(model, g, math.pi, probe, rep).crb for g in grid]
        assert all(b is not None for b in bounds)
        assert all(b2 < b1 for b1, b2 in zip(bounds, bounds[1:]))
