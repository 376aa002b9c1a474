"""Physical parameters of the nonlinear oscillator and the canonical chart maps.

The oscillator is described by mass ``m``, angular frequency ``omega``,
deformation ``lam`` (units of length**-2) and action quantum ``hbar``.  The
library is unit agnostic; natural units ``m = omega = hbar = 1`` are the
defaults.

``lam == 0`` is the simple harmonic oscillator.  Every routine that would
divide by ``lam`` dispatches to the analytic ``lam -> 0`` limit instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "OscillatorParams",
    "DerivedParams",
    "derive",
    "x_to_X",
    "X_to_x",
    "p_to_P",
    "P_to_p",
]


@dataclass(frozen=True)
class OscillatorParams:
    """Physical constants of the oscillator.

    Parameters
    ----------
    m, omega, hbar : float
        Mass, angular frequency and action quantum; finite and positive.
    lam : float
        Deformation parameter, finite and non-negative.
    """

    m: float = 1.0
    omega: float = 1.0
    lam: float = 0.1
    hbar: float = 1.0

    def __post_init__(self):
        for name in ("m", "omega", "hbar"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float, np.floating, np.integer)) and math.isfinite(value)):
                raise DomainError(f"{name} must be a finite real number, got {value!r}")
            if value <= 0:
                raise DomainError(f"{name} must be positive, got {value!r}")
        if not math.isfinite(self.lam) or self.lam < 0:
            raise DomainError(f"lam must be finite and >= 0, got {self.lam!r}")

    @property
    def undeformed(self) -> bool:
        return self.lam == 0

    @property
    def threshold(self) -> float:
        """Continuum threshold ``m omega**2 / (2 lam)`` (inf when undeformed)."""
        if self.undeformed:
            return math.inf
        return self.m * self.omega**2 / (2.0 * self.lam)

    def with_lam(self, lam: float) -> "OscillatorParams":
        return OscillatorParams(self.m, self.omega, lam, self.hbar)


@dataclass(frozen=True)
class DerivedParams:
    """Dimensionless quantities derived from :class:`OscillatorParams`.

    ``v``, ``sigma``, ``xi`` and ``epsilon_scale`` are ``inf`` on the
    undeformed branch.
    """

    v: float
    sigma: float
    b2: float
    xi: float
    epsilon_scale: float
    undeformed: bool


def derive(params: OscillatorParams) -> DerivedParams:
    """Compute ``v = m^2 w^2 / (hbar^2 lam^2)``, ``sigma``, ``b^2``, ``xi`` and ``2m/(lam hbar^2)``."""
    m, w, lam, hbar = params.m, params.omega, params.lam, params.hbar
    b2 = hbar / (m * w)
    if lam == 0:
        return DerivedParams(math.inf, math.inf, b2, math.inf, math.inf, True)
    v = (m * w / (hbar * lam)) ** 2
    sigma = 0.5 + 0.5 * math.sqrt(0.25 + v)
    xi = 1.0 / (lam * b2)
    return DerivedParams(v, sigma, b2, xi, 2.0 * m / (lam * hbar**2), False)


def x_to_X(x, params: OscillatorParams):
    """Map the physical coordinate to the canonical one, ``asinh(sqrt(lam) x) / sqrt(lam)``."""
    if params.lam == 0:
        return np.asarray(x, dtype=float) * 1.0
    sl = math.sqrt(params.lam)
    return np.arcsinh(sl * np.asarray(x, dtype=float)) / sl


def X_to_x(X, params: OscillatorParams):
    if params.lam == 0:
        return np.asarray(X, dtype=float) * 1.0
    sl = math.sqrt(params.lam)
    return np.sinh(sl * np.asarray(X, dtype=float)) / sl


def p_to_P(x, p, params: OscillatorParams):
    """Canonical momentum ``P = sqrt(1 + lam x^2) p``."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(1.0 + params.lam * x * x) * np.asarray(p, dtype=float)


def P_to_p(X, P, params: OscillatorParams):
    X = np.asarray(X, dtype=float)
    return np.asarray(P, dtype=float) / np.cosh(math.sqrt(params.lam) * X)
