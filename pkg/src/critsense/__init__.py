"""Quantum Fisher information for su(1,1) critical sensing.

Closed-form dynamic QFI for time-independent Hamiltonians on the su(1,1)
algebra, a catalog of critical models mapped onto it (effective quantum
Rabi, Lipkin-Meshkov-Glick, two-mode anti-PT), and brute-force truncated
Fock-space oracles that validate every closed-form result, including the
behavior exactly at the critical point.
"""

from .algebra import (
    Regime,
    RegimeInfo,
    boxdot,
    boxtimes,
    casimir_radicand,
    classify_regime,
    regime_of,
    vector3,
)
from .fock import (
    FockRepresentation,
    build_state,
    canonical_probe,
    moments,
    one_mode_K,
    two_mode_K,
)
from .generator import (
    CoefficientProfile,
    GeneratorDecomposition,
    cycloid_curve,
    generator_vector,
    h_vectors,
    scalar_profiles,
    series_partial_generator,
)
from .models import (
    AptParameters,
    LmgParameters,
    ModelSpec,
    QrmParameters,
    apt,
    full_rabi_hamiltonian,
    lmg,
    qrm_effective,
    sw_effective_check,
)
from .oracle import (
    OracleConfig,
    OracleError,
    TruncationError,
    converge_truncation,
    converged_oracle_qfi,
    evolve,
    qfi_finite_difference,
    qfi_series_oracle,
)
from .qfi import (
    AsymptoticCoefficients,
    QfiReport,
    asymptotic_coefficients,
    crb,
    fit_power_law,
    qfi_closed_form,
    qrm_asymptotic_factor,
    qrm_critical_coefficients,
)

__version__ = "0.1.0"

__all__ = [
    "Regime", "RegimeInfo", "boxdot", "boxtimes", "casimir_radicand",
    "classify_regime", "regime_of", "vector3",
    "FockRepresentation", "build_state", "canonical_probe", "moments",
    "one_mode_K", "two_mode_K",
    "CoefficientProfile", "GeneratorDecomposition", "cycloid_curve",
    "generator_vector", "h_vectors", "scalar_profiles", "series_partial_generator",
    "AptParameters", "LmgParameters", "ModelSpec", "QrmParameters",
    "apt", "full_rabi_hamiltonian", "lmg", "qrm_effective", "sw_effective_check",
    "OracleConfig", "OracleError", "TruncationError", "converge_truncation",
    "converged_oracle_qfi", "evolve", "qfi_finite_difference", "qfi_series_oracle",
    "AsymptoticCoefficients", "QfiReport", "asymptotic_coefficients", "crb",
    "fit_power_law", "qfi_closed_form", "qrm_asymptotic_factor",
    "qrm_critical_coefficients",
    "__version__",
]
