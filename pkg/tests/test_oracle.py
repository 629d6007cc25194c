"""Finite-difference and series oracles, truncation convergence management."""

import math

import numpy as np
import pytest

from critsense import (
    OracleConfig,
    QrmParameters,
    TruncationError,
    build_state,
    canonical_probe,
    converge_truncation,
    converged_oracle_qfi,
    evolve,
    one_mode_K,
    qfi_closed_form,
    qfi_finite_difference,
    qfi_series_oracle,
    qrm_effective,
)
from critsense.oracle import finite_difference_qfi_matrix

RNG = np.random.default_rng(31)


@pytest.fixture(scope="module")
def qrm_iso():
    return qrm_effective(QrmParameters(omega=1.0, zeta=1.0))


class TestEvolve:
    def test_zero_time_identity(self):
        h = np.diag([1.0, 2.0, 3.0]).astype(complex)
        psi = np.array([0.6, 0.8j, 0.0])
        np.testing.assert_allclose(evolve(h, 0.0, psi), psi, atol=1e-15)

    def test_harmonic_phase(self):
        # H = (n + 1/2) on the Fock basis: |1> picks up exp(-1.5j t)
        dim = 6
        h = np.diag(np.arange(dim) + 0.5).astype(complex)
        psi = np.zeros(dim, dtype=complex)
        psi[1] = 1.0
        out = evolve(h, 2.0, psi)
        assert out[1] == pytest.approx(np.exp(-1.5j * 2.0), abs=1e-14)

    def test_norm_preserved_long_time(self):
        rep = one_mode_K(32)
        model = qrm_effective(QrmParameters(omega=1.0, zeta=1.0))
        h = rep.operator(model.r(0.5))
        psi = canonical_probe(rep)
        out = evolve(h, 50.0, psi)
        assert abs(np.linalg.norm(out) - 1.0) <= 1e-12

    def test_rejects_non_hermitian(self):
        h = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(ValueError):
            evolve(h, 1.0, np.array([1.0, 0.0], dtype=complex))

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError):
            evolve(np.eye(3, dtype=complex), 1.0, np.array([1.0, 0.0], dtype=complex))


class TestFiniteDifference:
    def test_insensitive_point_gives_zero(self, qrm_iso):
        rep = one_mode_K(16)
        probe = canonical_probe(rep)
        value = qfi_finite_difference(qrm_iso, 0.0, 2.0, probe, rep)
        assert value == pytest.approx(0.0, abs=1e-8)

    def test_matches_closed_form(self, qrm_iso):
        rep = one_mode_K(128)
        probe = canonical_probe(rep)
        value = qfi_finite_difference(qrm_iso, 0.9, 2.0, probe, rep)
        closed = qfi_closed_form(qrm_iso, 0.9, 2.0, probe, rep).total
        assert value == pytest.approx(closed, rel=1e-5)

    def test_critical_adjudication_value(self, qrm_iso):
        value, _ = converged_oracle_qfi(qrm_iso, 1.0, 1.0, "canonical")
        assert value == pytest.approx(5 + 2 + 5 / 9, rel=1e-4)
        assert value != pytest.approx(9.0, rel=1e-2)

    def test_phase_invariance(self, qrm_iso):
        # adding a lam-dependent multiple of the identity multiplies the
        # evolved state by a smooth global phase
        rep = one_mode_K(96)
        probe = canonical_probe(rep)
        eye = np.eye(rep.dim)

        def bare(lam):
            return rep.operator(qrm_iso.r(lam))

        def phased(lam):
            return bare(lam) + (0.8 * lam + 1.3 * lam * lam) * eye

        f_bare = finite_difference_qfi_matrix(bare, 0.9, 2.0, probe)
        f_phased = finite_difference_qfi_matrix(phased, 0.9, 2.0, probe)
        assert f_phased == pytest.approx(f_bare, abs=1e-8 * max(1.0, f_bare))

    def test_step_robustness(self, qrm_iso):
        rep = one_mode_K(128)
        probe = canonical_probe(rep)
        a = qfi_finite_difference(qrm_iso, 0.9, 2.0, probe, rep, OracleConfig(fd_step=1e-5))
        b = qfi_finite_difference(qrm_iso, 0.9, 2.0, probe, rep, OracleConfig(fd_step=5e-6))
        assert b == pytest.approx(a, rel=1e-6)

    def test_richardson_off(self, qrm_iso):
        rep = one_mode_K(96)
        probe = canonical_probe(rep)
        value = qfi_finite_difference(
            qrm_iso, 0.9, 1.0, probe, rep, OracleConfig(richardson=False)
        )
        closed = qfi_closed_form(qrm_iso, 0.9, 1.0, probe, rep).total
        assert value == pytest.approx(closed, rel=1e-4)


class TestSeriesOracle:
    def test_leading_term(self, qrm_iso):
        # n_max = 0 keeps only -t hz: QFI = 4 t^2 Var[hz]
        from critsense import h_vectors, moments

        rep = one_mode_K(16)
        probe = canonical_probe(rep)
        t = 1.3
        value = qfi_series_oracle(qrm_iso, 0.9, t, probe, rep, 0)
        dec = h_vectors(qrm_iso.r(0.9), qrm_iso.rdot(0.9))
        hz = rep.operator(dec.b_z)
        var_z = moments(hz, hz, probe).var_a
        assert value == pytest.approx(4 * t * t * var_z, rel=1e-12)

    def test_exact_at_critical_order_two(self, qrm_iso):
        rep = one_mode_K(16)
        probe = canonical_probe(rep)
        for t in (0.5, 2.0):
            value = qfi_series_oracle(qrm_iso, 1.0, t, probe, rep, 2)
            closed = qfi_closed_form(qrm_iso, 1.0, t, probe, rep).total
            assert value == pytest.approx(closed, rel=1e-12)

    def test_converges_below_critical(self, qrm_iso):
        rep = one_mode_K(32)
        probe = canonical_probe(rep)
        value = qfi_series_oracle(qrm_iso, 0.9, 3.0, probe, rep, 40)
        closed = qfi_closed_form(qrm_iso, 0.9, 3.0, probe, rep).total
        assert value == pytest.approx(closed, rel=1e-10)


class TestConvergeTruncation:
    def test_mild_point_converges_small(self, qrm_iso):
        value, n_used = converged_oracle_qfi(qrm_iso, 0.5, 1.0, "canonical")
        assert n_used <= 64
        rep = one_mode_K(n_used)
        closed = qfi_closed_form(qrm_iso, 0.5, 1.0, canonical_probe(rep), rep).total
        assert value == pytest.approx(closed, rel=1e-6)

    def test_critical_needs_more_at_longer_times(self, qrm_iso):
        _, n_short = converged_oracle_qfi(qrm_iso, 1.0, 1.0, "canonical")
        _, n_long = converged_oracle_qfi(qrm_iso, 1.0, 3.0, "canonical")
        assert n_long > n_short

    def test_loose_tolerance_stops_no_later(self, qrm_iso):
        cfg_tight = OracleConfig(trunc_tol=1e-7)
        cfg_loose = OracleConfig(trunc_tol=1e-3)
        _, n_tight = converged_oracle_qfi(qrm_iso, 1.0, 2.0, "canonical", cfg_tight)
        _, n_loose = converged_oracle_qfi(qrm_iso, 1.0, 2.0, "canonical", cfg_loose)
        assert n_loose <= n_tight

    def test_ceiling_raises(self):
        calls = []

        def diverging(n):
            calls.append(n)
            return float(len(calls))  # never settles

        with pytest.raises(TruncationError):
            converge_truncation(diverging, OracleConfig(trunc_start=8), max_cutoff=32)
        assert calls == [8, 16, 32]

    def test_constant_converges_immediately(self):
        value, n_used = converge_truncation(lambda n: 42.0, OracleConfig(trunc_start=8))
        assert value == 42.0
        assert n_used == 16

    def test_config_validation(self):
        with pytest.raises(ValueError):
            OracleConfig(trunc_start=4)
        with pytest.raises(ValueError):
            OracleConfig(trunc_tol=0.0)
        with pytest.raises(ValueError):
            OracleConfig(fd_step=-1e-5)

    def test_two_mode_probe_rebuilt_per_cutoff(self):
        from critsense import AptParameters, apt

        model = apt(AptParameters(delta=1.0, estimand="kappa"))
        cfg = OracleConfig(trunc_start=12)
        value, n_used = converged_oracle_qfi(model, 0.5, 0.6, "vacuum", cfg)
        from critsense import two_mode_K

        rep = two_mode_K(n_used)
        closed = qfi_closed_form(model, 0.5, 0.6, build_state("vacuum", rep), rep).total
        assert value == pytest.approx(closed, rel=1e-5)
