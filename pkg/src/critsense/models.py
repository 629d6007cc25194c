"""Catalog of physical models mapped onto the su(1,1) coefficient algebra.

Each model supplies a differentiable map lam -> (r(lam), rdot(lam)) with
closed-form derivatives, its critical parameter values (where the radicand
vanishes), and its default truncated representation.  Constant
(lam-independent) terms are dropped from every Hamiltonian; they shift all
phases uniformly and cannot affect the Fisher information.

Models:

* ``qrm_effective`` -- normal-phase effective quantum Rabi model.  With
  g1 = g*(1+zeta)/2, g2 = g*(1-zeta)/2 the coefficients are
  r = (omega*(g2^2 - g1^2), 0, omega*(2 - g1^2 - g2^2)) and the phase
  transition sits at g_c = 2/(1+|zeta|).
* ``lmg`` -- Lipkin-Meshkov-Glick in its low-excitation bosonization:
  r = (gamma - 1, 0, 2*eta - gamma - 1), symmetry breaking at eta = 1.
* ``apt`` -- two-mode pseudo-anti-parity-time model:
  r = (0, -2*kappa, 2*delta), symmetry breaking at kappa = delta; either
  kappa or delta may be the estimand.
* ``full_rabi_hamiltonian`` -- the untruncated-spin Rabi Hamiltonian on
  spin x Fock, used to validate the effective model numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .algebra import Vector, vector3
from .fock import FockRepresentation, ladder, one_mode_K

__all__ = [
    "ModelSpec",
    "QrmParameters",
    "LmgParameters",
    "AptParameters",
    "qrm_effective",
    "lmg",
    "apt",
    "full_rabi_hamiltonian",
    "lift_to_spin_down",
    "sw_effective_check",
    "build_representation",
]


@dataclass(frozen=True)
class ModelSpec:
    """A physical model reduced to su(1,1) coefficient maps.

    ``r_of`` and ``rdot_of`` are closed-form maps of the estimand; the
    derivative is analytic, never a finite difference.  ``critical_values``
    lists the estimand values where the radicand vanishes.
    """

    name: str
    estimand: str
    r_of: Callable[[float], Vector]
    rdot_of: Callable[[float], Vector]
    critical_values: tuple[float, ...]
    representation: str  # "one-mode" | "two-mode"
    parameters: dict = field(default_factory=dict)
    degenerate: bool = False

    def r(self, lam: float) -> Vector:
        return self.r_of(lam)

    def rdot(self, lam: float) -> Vector:
        return self.rdot_of(lam)


def build_representation(model: ModelSpec, cutoff: int) -> FockRepresentation:
    """The model's default truncated representation at the given cutoff."""
    from .fock import two_mode_K

    if model.representation == "one-mode":
        return one_mode_K(cutoff)
    return two_mode_K(cutoff)


@dataclass(frozen=True)
class QrmParameters:
    """Quantum Rabi model parameters.

    ``gtilde`` is the dimensionless effective coupling 2 g / sqrt(Omega*omega)
    and the estimand; ``zeta`` weighs counter-rotating against rotating
    coupling; ``Omega`` (qubit frequency) matters only for the full model.
    """

    omega: float = 1.0
    zeta: float = 1.0
    gtilde: float = 0.0
    Omega: float | None = None

    def __post_init__(self):
        if not (self.omega > 0):
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.zeta < 0:
            raise ValueError(f"zeta must be >= 0, got {self.zeta}")
        if self.gtilde < 0:
            raise ValueError(f"gtilde must be >= 0, got {self.gtilde}")
        if self.Omega is not None and not (self.Omega > 0):
            raise ValueError(f"Omega must be positive, got {self.Omega}")

    @property
    def g1(self) -> float:
        return self.gtilde * (1.0 + self.zeta) / 2.0

    @property
    def g2(self) -> float:
        return self.gtilde * (1.0 - self.zeta) / 2.0

    @property
    def critical_coupling(self) -> float:
        return 2.0 / (1.0 + abs(self.zeta))


@dataclass(frozen=True)
class LmgParameters:
    """LMG anisotropy gamma and effective field eta (the estimand)."""

    gamma: float = 0.0
    eta: float = 0.0


@dataclass(frozen=True)
class AptParameters:
    """Two-mode anti-PT model: detuning delta, coupling kappa."""

    delta: float = 1.0
    kappa: float = 0.0
    estimand: str = "kappa"

    def __post_init__(self):
        if self.delta < 0 or self.kappa < 0:
            raise ValueError("delta and kappa must be >= 0")
        if self.estimand not in ("kappa", "delta"):
            raise ValueError(f"estimand must be 'kappa' or 'delta', got {self.estimand!r}")


def qrm_effective(p: QrmParameters) -> ModelSpec:
    """Normal-phase effective Rabi model with estimand gtilde.

    r1 = -omega*zeta*g^2 and r3 = omega*(2 - g^2*(1+zeta^2)/2), both
    polynomial in g, so rdot is analytic:
    rdot = (-2*omega*zeta*g, 0, -omega*(1+zeta^2)*g).
    """
    w, z = p.omega, p.zeta

    def r_of(g: float) -> Vector:
        return vector3(-w * z * g * g, 0.0, w * (2.0 - g * g * (1.0 + z * z) / 2.0))

    def rdot_of(g: float) -> Vector:
        return vector3(-2.0 * w * z * g, 0.0, -w * (1.0 + z * z) * g)

    return ModelSpec(
        name="qrm",
        estimand="gtilde",
        r_of=r_of,
        rdot_of=rdot_of,
        critical_values=(p.critical_coupling,),
        representation="one-mode",
        parameters={"omega": w, "zeta": z, "gtilde": p.gtilde},
    )


def lmg(p: LmgParameters) -> ModelSpec:
    """Bosonized LMG with estimand eta; critical at eta = 1.

    gamma = 1 is legal but degenerate: r1 vanishes, the generator loses its
    cross terms and the Fisher information keeps only the trivial t^2 part.
    The returned spec is flagged accordingly.
    """
    gamma = p.gamma

    def r_of(eta: float) -> Vector:
        return vector3(gamma - 1.0, 0.0, 2.0 * eta - gamma - 1.0)

    def rdot_of(eta: float) -> Vector:
        return vector3(0.0, 0.0, 2.0)

    return ModelSpec(
        name="lmg",
        estimand="eta",
        r_of=r_of,
        rdot_of=rdot_of,
        critical_values=(1.0,),
        representation="one-mode",
        parameters={"gamma": gamma, "eta": p.eta},
        degenerate=(gamma == 1.0),
    )


def apt(p: AptParameters) -> ModelSpec:
    """Two-mode anti-PT model; estimand kappa or delta, critical at kappa = delta."""
    if p.estimand == "kappa":
        delta = p.delta

        def r_of(kappa: float) -> Vector:
            return vector3(0.0, -2.0 * kappa, 2.0 * delta)

        def rdot_of(kappa: float) -> Vector:
            return vector3(0.0, -2.0, 0.0)

        critical = (delta,)
    else:
        kappa = p.kappa

        def r_of(delta: float) -> Vector:
            return vector3(0.0, -2.0 * kappa, 2.0 * delta)

        def rdot_of(delta: float) -> Vector:
            return vector3(0.0, 0.0, 2.0)

        critical = (kappa,)

    return ModelSpec(
        name="apt",
        estimand=p.estimand,
        r_of=r_of,
        rdot_of=rdot_of,
        critical_values=critical,
        representation="two-mode",
        parameters={"delta": p.delta, "kappa": p.kappa, "estimand": p.estimand},
    )


def full_rabi_hamiltonian(p: QrmParameters, g: float, cutoff: int) -> np.ndarray:
    """Full Rabi Hamiltonian on spin (x) Fock, dimension 2*(cutoff+1).

    H = omega adag a + Omega/2 sigma_z
        + g [(sigma_+ a + sigma_- adag) + zeta (sigma_+ adag + sigma_- a)]

    Spin basis order (up, down); the bare coupling g relates to the
    effective one via g = gtilde * sqrt(Omega*omega) / 2.
    """
    if cutoff < 4:
        raise ValueError(f"full-model cutoff must be >= 4, got {cutoff}")
    if p.Omega is None:
        raise ValueError("full Rabi model requires the qubit frequency Omega")
    dim = cutoff + 1
    a = ladder(dim)
    ad = a.T
    eye = np.eye(dim)
    sz = np.diag([1.0, -1.0])
    sp = np.array([[0.0, 1.0], [0.0, 0.0]])  # |up><down|
    sm = sp.T

    h = p.omega * np.kron(np.eye(2), ad @ a) + 0.5 * p.Omega * np.kron(sz, eye)
    h = h + g * (np.kron(sp, a) + np.kron(sm, ad))
    h = h + g * p.zeta * (np.kron(sp, ad) + np.kron(sm, a))
    return h.astype(complex)


def lift_to_spin_down(probe: np.ndarray) -> np.ndarray:
    """Embed a bosonic state as spin-down (x) probe in the full model basis."""
    return np.kron(np.array([0.0, 1.0]), probe)


def sw_effective_check(
    p: QrmParameters,
    t: float,
    probe: np.ndarray,
    cutoff: int,
    cfg=None,
) -> float:
    """Relative gap between full-Rabi and effective-model Fisher information.

    The full-model value comes from the finite-difference oracle with the
    estimand gtilde entering through g = gtilde*sqrt(Omega*omega)/2 and the
    probe lifted to the spin-down subspace; the effective value is the
    closed form.  Returns |F_full - F_eff| / F_eff (0 when both vanish).
    The gap is the Schrieffer-Wolff error, O(omega/Omega).
    """
    from .oracle import OracleConfig, finite_difference_qfi_matrix
    from .qfi import qfi_closed_form

    if p.Omega is None:
        raise ValueError("sw_effective_check requires the qubit frequency Omega")
    if p.gtilde == 0.0:
        # no coupling: neither evolution depends on the estimand
        return 0.0
    if cfg is None:
        cfg = OracleConfig()
    rep = one_mode_K(cutoff)
    if probe.shape[0] != rep.dim:
        raise ValueError(f"probe dimension {probe.shape[0]} != one-mode dim {rep.dim}")

    model = qrm_effective(p)
    f_eff = qfi_closed_form(model, p.gtilde, t, probe, rep).total

    scale = math.sqrt(p.Omega * p.omega) / 2.0

    def build(gtilde: float) -> np.ndarray:
        return full_rabi_hamiltonian(p, gtilde * scale, cutoff)

    f_full = finite_difference_qfi_matrix(build, p.gtilde, t, lift_to_spin_down(probe), cfg)
    if f_eff == 0.0:
        return 0.0 if f_full == 0.0 else math.inf
    return abs(f_full - f_eff) / f_eff
