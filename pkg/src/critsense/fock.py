"""Truncated Fock-space matrices for the su(1,1) generators and probe states.

Two concrete realizations are provided:

* one-mode:  Kx = (a^2 + adag^2)/4, Ky = 1j (a^2 - adag^2)/4,
             Kz = (adag a + a adag)/4  (diagonal (2n+1)/4)
* two-mode:  Kx = (adag bdag + a b)/2, Ky = 1j (a b - adag bdag)/2,
             Kz = (adag a + bdag b + 1)/2  (diagonal (na+nb+1)/2)

Matrices are dense and exact projections of the untruncated operators onto
the kept basis (the diagonal generators are built directly, not from
truncated ladder products, so no truncation artifact enters them).  The
algebra [Kx,Ky] = -1j Kz etc. holds exactly on states at least two
excitations below the cutoff; the top two levels carry truncation edges.

Two-mode basis ordering is row-major in (na, nb): index = na*(N+1) + nb.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FockRepresentation",
    "one_mode_K",
    "two_mode_K",
    "ladder",
    "build_state",
    "canonical_probe",
    "moments",
    "PairMoments",
    "truncation_safe_mask",
]

_IMAG_RTOL = 1e-12


def ladder(dim: int) -> np.ndarray:
    """Annihilation operator on a dim-dimensional Fock block."""
    return np.diag(np.sqrt(np.arange(1.0, dim)), k=1)


@dataclass(frozen=True)
class FockRepresentation:
    """Concrete Hermitian matrices for (Kx, Ky, Kz) in a truncated basis."""

    mode_count: int
    cutoff: int
    kx: np.ndarray = field(repr=False)
    ky: np.ndarray = field(repr=False)
    kz: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.kx.shape[0]

    def operator(self, coeffs) -> np.ndarray:
        """Contract a coefficient 3-vector against (Kx, Ky, Kz)."""
        return coeffs[0] * self.kx + coeffs[1] * self.ky + coeffs[2] * self.kz

    def excitations(self) -> np.ndarray:
        """Total excitation number of each basis state."""
        if self.mode_count == 1:
            return np.arange(self.cutoff + 1)
        n = self.cutoff + 1
        na, nb = np.divmod(np.arange(n * n), n)
        return na + nb


def one_mode_K(cutoff: int) -> FockRepresentation:
    """One-mode bosonic realization with photon numbers 0..cutoff."""
    if cutoff < 2:
        raise ValueError(f"one-mode cutoff must be >= 2, got {cutoff}")
    a = ladder(cutoff + 1)
    asq = a @ a
    kx = (asq + asq.T) / 4.0
    ky = 1j * (asq - asq.T) / 4.0
    kz = np.diag((2.0 * np.arange(cutoff + 1) + 1.0) / 4.0)
    return FockRepresentation(1, cutoff, kx.astype(complex), ky, kz.astype(complex))


def two_mode_K(cutoff: int) -> FockRepresentation:
    """Two-mode realization, cutoff photons per mode, dimension (cutoff+1)^2."""
    if cutoff < 2:
        raise ValueError(f"two-mode cutoff must be >= 2, got {cutoff}")
    n = cutoff + 1
    eye = np.eye(n)
    a = np.kron(ladder(n), eye)
    b = np.kron(eye, ladder(n))
    ab = a @ b
    kx = (ab.T + ab) / 2.0
    ky = 1j * (ab - ab.T) / 2.0
    na, nb = np.divmod(np.arange(n * n), n)
    kz = np.diag((na + nb + 1.0) / 2.0)
    return FockRepresentation(2, cutoff, kx.astype(complex), ky, kz.astype(complex))


def truncation_safe_mask(rep: FockRepresentation, margin: int = 2) -> np.ndarray:
    """Boolean mask of basis states at least `margin` excitations below cutoff."""
    return rep.excitations() <= rep.cutoff - margin


def _fock_index(rep: FockRepresentation, occ) -> int:
    if rep.mode_count == 1:
        n = int(occ)
        if not (0 <= n <= rep.cutoff):
            raise ValueError(f"occupation {n} beyond cutoff {rep.cutoff}")
        return n
    na, nb = (int(occ[0]), int(occ[1]))
    if not (0 <= na <= rep.cutoff and 0 <= nb <= rep.cutoff):
        raise ValueError(f"occupation {(na, nb)} beyond cutoff {rep.cutoff}")
    return na * (rep.cutoff + 1) + nb


def build_state(spec, rep: FockRepresentation) -> np.ndarray:
    """Construct a normalized probe state from a declarative description.

    Accepted forms:
      "vacuum"                     -> |0> or |00>
      "canonical"                  -> (|0> + |1>)/sqrt(2), one-mode only
      {"fock": {occ: weight}}      -> normalized Fock superposition; keys are
                                      ints (one-mode) or (na, nb) pairs
      {"coherent": alpha}          -> truncated, renormalized coherent state,
                                      one-mode only
    """
    psi = np.zeros(rep.dim, dtype=complex)
    if isinstance(spec, str):
        if spec == "vacuum":
            psi[0] = 1.0
            return psi
        if spec == "canonical":
            if rep.mode_count != 1:
                raise ValueError("canonical probe is defined for the one-mode representation")
            psi[_fock_index(rep, 0)] = 1.0
            psi[_fock_index(rep, 1)] = 1.0
            return psi / np.sqrt(2.0)
        raise ValueError(f"unknown state spec {spec!r}")

    if not isinstance(spec, dict) or not spec:
        raise ValueError(f"empty or malformed state spec {spec!r}")

    if "fock" in spec:
        weights = spec["fock"]
        if not weights:
            raise ValueError("fock superposition spec is empty")
        for occ, amp in weights.items():
            psi[_fock_index(rep, occ)] += complex(amp)
    elif "coherent" in spec:
        if rep.mode_count != 1:
            raise ValueError("coherent state spec is one-mode only")
        alpha = complex(spec["coherent"])
        if alpha == 0:
            psi[0] = 1.0
        else:
            n = np.arange(rep.cutoff + 1)
            log_fact = np.cumsum(
                np.concatenate([[0.0], np.log(np.arange(1.0, rep.cutoff + 1))])
            )
            # amplitudes alpha^n / sqrt(n!); overall constant dies in the
            # renormalization after truncation
            psi = np.exp(n * np.log(alpha) - 0.5 * log_fact)
    else:
        raise ValueError(f"unknown state spec keys {sorted(spec)!r}")

    norm = np.linalg.norm(psi)
    if norm == 0.0:
        raise ValueError("state spec has zero norm")
    return psi / norm


def canonical_probe(rep: FockRepresentation) -> np.ndarray:
    """The (|0> + |1>)/sqrt(2) probe used throughout the one-mode examples."""
    return build_state("canonical", rep)


@dataclass(frozen=True)
class PairMoments:
    """First and second moments of a pair of Hermitian operators."""

    mean_a: float
    mean_b: float
    var_a: float
    var_b: float
    cov: float


def _real_checked(z: complex, what: str) -> float:
    if abs(z.imag) > _IMAG_RTOL * max(1.0, abs(z.real)):
        raise ValueError(f"{what} has non-negligible imaginary part {z.imag:.3e}")
    return z.real


def moments(a: np.ndarray, b: np.ndarray, psi: np.ndarray) -> PairMoments:
    """Means, variances and symmetrized covariance of (a, b) in state psi.

    cov = <{a, b}>/2 - <a><b>.  Inputs must be Hermitian and dimensionally
    compatible with psi; imaginary residues beyond roundoff raise.
    """
    if a.shape != b.shape or a.shape[0] != psi.shape[0]:
        raise ValueError(
            f"dimension mismatch: a {a.shape}, b {b.shape}, psi {psi.shape}"
        )
    a_psi = a @ psi
    b_psi = b @ psi
    mean_a = _real_checked(complex(np.vdot(psi, a_psi)), "<A>")
    mean_b = _real_checked(complex(np.vdot(psi, b_psi)), "<B>")
    # <A^2> = <A psi | A psi> for Hermitian A; real by construction.
    var_a = float(np.real(np.vdot(a_psi, a_psi))) - mean_a**2
    var_b = float(np.real(np.vdot(b_psi, b_psi))) - mean_b**2
    cov = float(np.real(np.vdot(a_psi, b_psi))) - mean_a * mean_b
    return PairMoments(mean_a=mean_a, mean_b=mean_b, var_a=var_a, var_b=var_b, cov=cov)
