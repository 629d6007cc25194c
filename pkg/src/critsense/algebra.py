"""Minkowski-signature vector algebra for su(1,1) coefficient dynamics.

Every Hamiltonian handled by this package is a fixed linear combination
``H = r1*Kx + r2*Ky + r3*Kz`` of the su(1,1) generators, so all of its
dynamics reduces to algebra on the real coefficient 3-vector ``r``.  The
structure constants induce a signature-(+, +, -) dot product and a matching
cross product on these vectors.  The sign of the squared modulus
``s = boxdot(r, r)`` selects among hyperbolic (s > 0), trigonometric /
cycloid (s < 0) and critical (s = 0) dynamics; we carry ``s`` itself rather
than its possibly imaginary square root, which keeps every downstream
formula an entire function with no branch cuts.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Vector",
    "vector3",
    "boxdot",
    "boxtimes",
    "casimir_radicand",
    "Regime",
    "RegimeInfo",
    "classify_regime",
    "regime_of",
    "DEFAULT_CRITICAL_EPS",
]

# A coefficient vector is a plain float ndarray of shape (3,).
Vector = np.ndarray

#: Relative half-width of the critical band in units of the classification
#: scale.  Double-precision noise floor; classification affects reporting
#: only, never the generator evaluation (which is entire in s).
DEFAULT_CRITICAL_EPS = 1e-12


def vector3(r1: float, r2: float, r3: float) -> Vector:
    """Build a coefficient vector, rejecting non-finite components."""
    v = np.array([r1, r2, r3], dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"coefficient vector must be finite, got {v!r}")
    return v


def boxdot(a: Vector, b: Vector) -> float:
    """Signature-(+, +, -) bilinear form: a1*b1 + a2*b2 - a3*b3."""
    return float(a[0] * b[0] + a[1] * b[1] - a[2] * b[2])


def boxtimes(a: Vector, b: Vector) -> Vector:
    """Cross product matched to the su(1,1) structure constants.

    Defined so that ``[a.K, b.K] = 1j * boxtimes(a, b).K``.  Note the third
    component is ``a2*b1 - a1*b2``, the opposite sign of the Euclidean cross
    product; antisymmetric in its arguments.
    """
    return np.array(
        [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[1] * b[0] - a[0] * b[1],
        ]
    )


def casimir_radicand(r: Vector) -> float:
    """Squared modulus s = boxdot(r, r) = r1^2 + r2^2 - r3^2.

    Real and of either sign; the scalar "|r|" of the closed-form dynamics
    is sqrt(|s|).
    """
    return boxdot(r, r)


class Regime(str, enum.Enum):
    """Dynamical regime selected by the sign of the radicand."""

    HYPERBOLIC = "hyperbolic"
    TRIGONOMETRIC = "trigonometric"
    CRITICAL = "critical"


@dataclass(frozen=True)
class RegimeInfo:
    """Classified radicand with the derived modulus and cycloid period.

    ``period`` is 2*pi/modulus and present only in the trigonometric
    regime, where the coefficient dynamics is periodic.
    """

    radicand: float
    regime: Regime
    modulus: float
    period: float | None = None


def classify_regime(s: float, scale: float = 1.0, eps: float = DEFAULT_CRITICAL_EPS) -> RegimeInfo:
    """Classify a radicand value relative to a squared-frequency scale.

    Critical iff |s| <= eps * scale; otherwise the sign of s decides.
    """
    if not (scale > 0.0):
        raise ValueError(f"scale must be positive, got {scale}")
    if not (eps > 0.0):
        raise ValueError(f"eps must be positive, got {eps}")
    if not math.isfinite(s):
        raise ValueError(f"radicand must be finite, got {s}")
    modulus = math.sqrt(abs(s))
    if abs(s) <= eps * scale:
        return RegimeInfo(s, Regime.CRITICAL, modulus)
    if s > 0.0:
        return RegimeInfo(s, Regime.HYPERBOLIC, modulus)
    return RegimeInfo(s, Regime.TRIGONOMETRIC, modulus, period=2.0 * math.pi / modulus)


def regime_of(r: Vector, eps: float = DEFAULT_CRITICAL_EPS) -> RegimeInfo:
    """Classify a coefficient vector using scale max(1, |r|_euclid^2)."""
    s = casimir_radicand(r)
    scale = max(1.0, float(np.dot(r, r)))
    return classify_regime(s, scale=scale, eps=eps)
