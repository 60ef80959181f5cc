"""
Lobachevsky function and the closed-form volumes built from it.

Λ(θ) = -∫_0^θ log|2 sin t| dt = Cl2(2θ)/2. After reducing 2θ into [-π, π] the Clausen function is
evaluated from its Bernoulli expansion

    Cl2(x) = x - x log|x| + Σ_{k≥1} |B_2k| x^(2k+1) / (2k (2k+1)!),

whose terms shrink by (x/2π)^2 <= 1/4, so a fixed number of terms reaches double precision.
"""

import math

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike
from scipy.special import bernoulli, factorial

from hypfull.core.errors import DomainError

_SERIES_TERMS = 26
_B = bernoulli(2 * _SERIES_TERMS)
_COEFFICIENTS = np.array(
    [0.0]
    + [abs(_B[2 * k]) / (2 * k * factorial(2 * k + 1, exact=False)) for k in range(1, _SERIES_TERMS + 1)]
)


def clausen2(x: ArrayLike) -> np.ndarray:
    """Cl2 on [-π, π] (no range reduction)."""
    x = np.asarray(x, dtype=float)
    ax = np.abs(x)
    log_term = np.where(ax > 0, x * np.log(np.where(ax > 0, ax, 1.0)), 0.0)
    return x - log_term + x * np.polynomial.polynomial.polyval(x * x, _COEFFICIENTS)


def lobachevsky(theta: ArrayLike) -> float | np.ndarray:
    """Λ(θ) for scalar or array θ; odd and π-periodic."""
    t = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(t)):
        msg = f"Lobachevsky function needs finite arguments, got {theta!r}"
        logger.error(msg)
        raise DomainError(msg)
    reduced = t - np.pi * np.round(t / np.pi)
    value = 0.5 * clausen2(2.0 * reduced)
    if np.ndim(value) == 0:
        return float(value)
    return value


V3 = 3.0 * lobachevsky(math.pi / 3)
"""Volume of the regular ideal tetrahedron, 3Λ(π/3)."""

V8 = 8.0 * lobachevsky(math.pi / 4)
"""Volume of the regular ideal octahedron, 8Λ(π/4)."""


def dodecahedron_theta(*, literal: bool = False) -> float:
    """
    Angle of the closed form for the right-angled dodecahedron.

    The default reading is π/2 - arccos(1 / (2 cos(π/5))). `literal=True` gives the reading
    π/2 - arccos(cos(π/5) / 2), which does not reproduce the dodecahedron volume.
    """
    c = math.cos(math.pi / 5)
    return math.pi / 2 - math.acos(c / 2 if literal else 1 / (2 * c))


def dodecahedron_volume_closed_form(theta: float | None = None, *, repeated_term: bool = False) -> float:
    """
    Volume of the right-angled dodecahedron, (5/2)(2Λ(θ) + Λ(θ+π/5) + Λ(θ-π/5) + Λ(π/2-2θ)).

    `repeated_term=True` evaluates the variant with Λ(θ+π/5) written twice.
    """
    t = dodecahedron_theta() if theta is None else theta
    s = math.pi / 5
    second = lobachevsky(t + s) if repeated_term else lobachevsky(t - s)
    return 2.5 * (2 * lobachevsky(t) + lobachevsky(t + s) + second + lobachevsky(math.pi / 2 - 2 * t))


def orthoscheme_volume(alpha1: ArrayLike, alpha2: ArrayLike, alpha3: ArrayLike) -> float | np.ndarray:
    """
    Volume of a compact orthoscheme from its essential dihedral angles α1, α2, α3.

    With tan δ = sqrt(cos²α2 - sin²α1 sin²α3) / (cos α1 cos α3):

        4V = Λ(α1+δ) - Λ(α1-δ) + Λ(α3+δ) - Λ(α3-δ) - Λ(π/2-α2+δ) + Λ(π/2-α2-δ) + 2Λ(π/2-δ)
    """
    a1 = np.asarray(alpha1, dtype=float)
    a2 = np.asarray(alpha2, dtype=float)
    a3 = np.asarray(alpha3, dtype=float)
    radicand = np.cos(a2) ** 2 - (np.sin(a1) * np.sin(a3)) ** 2
    delta = np.arctan2(np.sqrt(np.clip(radicand, 0.0, None)), np.cos(a1) * np.cos(a3))
    half = np.pi / 2
    total = (
        lobachevsky(a1 + delta)
        - lobachevsky(a1 - delta)
        + lobachevsky(a3 + delta)
        - lobachevsky(a3 - delta)
        - lobachevsky(half - a2 + delta)
        + lobachevsky(half - a2 - delta)
        + 2 * lobachevsky(half - delta)
    )
    value = 0.25 * np.asarray(total)
    if np.ndim(value) == 0:
        return float(value)
    return value
