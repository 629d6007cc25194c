"""Quantum Fisher information in closed form via the generator's variance.

For a pure probe and unitary family exp(-1j H(lam) t), the QFI equals four
times the variance of the parametrization generator in the probe.  With the
generator resummed as f_x*hx + f_y*hy + f_z*hz the variance splits into six
pair contributions, reported individually:

    F = 4 * [ f_z^2 Var(hz)            (zz)
            + 2 f_y f_z Cov(hy, hz)    (yz)
            + 2 f_x f_z Cov(hx, hz)    (xz)
            + f_y^2 Var(hy)            (yy)
            + 2 f_x f_y Cov(hx, hy)    (xy)
            + f_x^2 Var(hx) ]          (xx)

In the trigonometric regime these parts coincide, signs included, with the
conventional six-part decomposition written in terms of the cycloid
coordinates (x, y, z) and powers of sqrt(|s|): the sign carried there by
the odd powers of the coordinates is absorbed here by the f profiles.

Near a critical point the parts scale as t^2, t^3, t^4, t^4, t^5, t^6; the
time-independent limit coefficients are exposed by
``asymptotic_coefficients``.  ``compat`` mode additionally zeroes the hx
term exactly at criticality, reproducing the published critical-point
power law (which drops that term); the default keeps it, and the
finite-difference oracle arbitrates between the two (see
``critsense.verify.critical_adjudication``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .algebra import Regime, RegimeInfo, regime_of
from .fock import FockRepresentation, moments
from .generator import h_vectors, scalar_profiles
from .models import ModelSpec

__all__ = [
    "PART_KEYS",
    "QfiReport",
    "AsymptoticCoefficients",
    "qfi_closed_form",
    "asymptotic_coefficients",
    "qrm_asymptotic_factor",
    "qrm_critical_coefficients",
    "crb",
    "fit_power_law",
]

#: Pair labels in the conventional order (F1..F6).
PART_KEYS = ("zz", "yz", "xz", "yy", "xy", "xx")


@dataclass(frozen=True)
class QfiReport:
    """Six-part QFI with its Cramer-Rao bound and regime metadata.

    ``total`` is exactly 4 * sum(parts.values()); ``crb`` is the
    single-measurement bound 1/sqrt(total), absent when total vanishes.
    """

    total: float
    parts: dict[str, float]
    crb: float | None
    regime: RegimeInfo
    time: float
    compat_mode: bool


@dataclass(frozen=True)
class AsymptoticCoefficients:
    """Time-power coefficients of the QFI at and near the critical point.

    The a_* fields are the near-critical limits multiplying t^6 (xx),
    t^4 (yy), t^2 (zz), t^5 (xy), t^4 (xz), t^3 (yz).  The b_* fields are
    the at-critical coefficients of t^4, t^3, t^2 when the hx term is
    dropped (compat convention).
    """

    a_xx: float
    a_yy: float
    a_zz: float
    a_xy: float
    a_xz: float
    a_yz: float
    b_yy: float
    b_yz: float
    b_zz: float


def _pair_stats(hx: np.ndarray, hy: np.ndarray, hz: np.ndarray, psi: np.ndarray):
    """Variances and covariances of the operator triple in psi."""
    m_xy = moments(hx, hy, psi)
    m_xz = moments(hx, hz, psi)
    m_yz = moments(hy, hz, psi)
    return (
        m_xy.var_a,   # Var hx
        m_xy.var_b,   # Var hy
        m_yz.var_b,   # Var hz
        m_xy.cov,     # Cov(hx, hy)
        m_xz.cov,     # Cov(hx, hz)
        m_yz.cov,     # Cov(hy, hz)
    )


def qfi_closed_form(
    model: ModelSpec,
    lam: float,
    t: float,
    probe: np.ndarray,
    rep: FockRepresentation,
    compat: bool = False,
) -> QfiReport:
    """Closed-form QFI of the evolved probe at estimand value lam, time t."""
    if t < 0:
        raise ValueError(f"time must be >= 0, got {t}")
    r = model.r(lam)
    rdot = model.rdot(lam)
    info = regime_of(r)
    dec = h_vectors(r, rdot)
    prof = scalar_profiles(dec.s, t)

    b_x = dec.b_x
    if compat and info.regime is Regime.CRITICAL:
        b_x = np.zeros(3)

    hx = rep.operator(b_x)
    hy = rep.operator(dec.b_y)
    hz = rep.operator(dec.b_z)
    var_x, var_y, var_z, cov_xy, cov_xz, cov_yz = _pair_stats(hx, hy, hz, probe)

    fx, fy, fz = prof.f_x, prof.f_y, prof.f_z
    parts = {
        "zz": fz * fz * var_z,
        "yz": 2.0 * fy * fz * cov_yz,
        "xz": 2.0 * fx * fz * cov_xz,
        "yy": fy * fy * var_y,
        "xy": 2.0 * fx * fy * cov_xy,
        "xx": fx * fx * var_x,
    }
    total = 4.0 * sum(parts.values())
    return QfiReport(
        total=total,
        parts=parts,
        crb=(1.0 / math.sqrt(total)) if total > 0.0 else None,
        regime=info,
        time=t,
        compat_mode=compat,
    )


def asymptotic_coefficients(
    model: ModelSpec, probe: np.ndarray, rep: FockRepresentation
) -> AsymptoticCoefficients:
    """Power-law coefficients from the operator moments at the critical point.

    The coefficient vectors are polynomial in the estimand, so they are
    evaluated directly at the critical value; combined with the leading
    t-powers of the profiles this yields the near-critical six-term law
    and the at-critical three-term law.
    """
    if not model.critical_values:
        raise ValueError(f"model {model.name!r} declares no critical point")
    lam_c = model.critical_values[0]
    dec = h_vectors(model.r(lam_c), model.rdot(lam_c))
    hx = rep.operator(dec.b_x)
    hy = rep.operator(dec.b_y)
    hz = rep.operator(dec.b_z)
    var_x, var_y, var_z, cov_xy, cov_xz, cov_yz = _pair_stats(hx, hy, hz, probe)
    return AsymptoticCoefficients(
        a_xx=var_x / 9.0,
        a_yy=var_y,
        a_zz=4.0 * var_z,
        a_xy=-(2.0 / 3.0) * cov_xy,
        a_xz=(4.0 / 3.0) * cov_xz,
        a_yz=-4.0 * cov_yz,
        b_yy=var_y,
        b_yz=-4.0 * cov_yz,
        b_zz=4.0 * var_z,
    )


def qrm_asymptotic_factor(zeta: float, omega: float = 1.0) -> float:
    """Leading t^6 factor of the near-critical Rabi-model QFI.

    320 zeta^4 omega^6 / (9 (1+zeta)^6); maximal at zeta = 2.  The closed
    constant presumes the (|0>+|1>)/sqrt(2) probe, whose Var(Kx - Kz) is
    5/16; for other probes use ``asymptotic_coefficients``.
    """
    if zeta < 0:
        raise ValueError(f"zeta must be >= 0, got {zeta}")
    if not (omega > 0):
        raise ValueError(f"omega must be positive, got {omega}")
    return 320.0 * zeta**4 * omega**6 / (9.0 * (1.0 + zeta) ** 6)


def qrm_critical_coefficients(zeta: float, omega: float = 1.0) -> tuple[float, float]:
    """At-critical (t^4, t^2) coefficients of the Rabi-model QFI.

    (16 zeta^2 omega^4/(1+zeta)^2, omega^2 [16 zeta^2 + (1+zeta^2)^2]/(1+zeta)^2).
    Valid for the (|0>+|1>)/sqrt(2) probe under the compat convention that
    drops the hx term at the critical point.
    """
    if zeta < 0:
        raise ValueError(f"zeta must be >= 0, got {zeta}")
    if not (omega > 0):
        raise ValueError(f"omega must be positive, got {omega}")
    b1 = 16.0 * zeta**2 * omega**4 / (1.0 + zeta) ** 2
    b2 = omega**2 * (16.0 * zeta**2 + (1.0 + zeta**2) ** 2) / (1.0 + zeta) ** 2
    return b1, b2


def crb(f: float, nu: int = 1) -> float:
    """Cramer-Rao lower bound 1/sqrt(nu * F) for nu repeated measurements."""
    if not (f > 0):
        raise ValueError(f"Fisher information must be positive, got {f}")
    if nu < 1:
        raise ValueError(f"measurement count must be >= 1, got {nu}")
    return 1.0 / math.sqrt(nu * f)


def fit_power_law(t_grid, f_grid) -> tuple[float, float, float]:
    """Least-squares power-law fit F ~ prefactor * t^exponent.

    Returns (exponent, prefactor, residual) where residual is the maximum
    relative deviation of the fit from the data.  Requires >= 3 strictly
    positive points.
    """
    t = np.asarray(t_grid, dtype=float)
    f = np.asarray(f_grid, dtype=float)
    if t.size < 3 or t.size != f.size:
        raise ValueError("need at least 3 matching (t, F) points")
    if np.any(t <= 0) or np.any(f <= 0):
        raise ValueError("power-law fit requires strictly positive data")
    slope, intercept = np.polyfit(np.log(t), np.log(f), 1)
    fit = np.exp(intercept) * t**slope
    residual = float(np.max(np.abs(fit - f) / f))
    return float(slope), float(np.exp(intercept)), residual
