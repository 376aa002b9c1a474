"""f-deformed ladder algebra in a truncated number basis.

``b = a f(n)`` with ``f(n)**2 = sqrt(1/(4v) + 1) - n / (2 sqrt v)``, so that
``(hbar w / 2)(b b^H + b^H b)`` reproduces the bound spectrum on its
diagonal.  ``f(n)**2`` turns negative above ``floor(sqrt(1 + 4v))``; the
basis is never extended past that index.

The closed form of the commutator is kept with its ``hbar w / 2`` weight,
i.e. ``(hbar w / 2)[b, b^H]_nn = (hbar w / (2 sqrt v)) (S - (n + 1/2))``;
``[b, b^H]`` itself is dimensionless.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import OscillatorParams, derive
from .errors import AlgebraTruncationError, DomainError
from .spectrum import f_cutoff, f_deformation

__all__ = [
    "FockOperator",
    "DeformedCoherent",
    "TruncationWarning",
    "ladder_ops",
    "deformed_ops",
    "hamiltonian_fock",
    "commutator_bb",
    "commutator_bb_closed",
    "poisson_coherent",
    "coherent_type2",
    "eigen_residual",
]


class TruncationWarning(UserWarning):
    """Requested dimension runs past the f-positivity cutoff."""


@dataclass(frozen=True)
class FockOperator:
    """``D x D`` matrix in the basis ``|0>, ..., |D-1>``.

    ``band`` is ``"diagonal"``, ``"sub"`` or ``"super"`` when the matrix is
    structurally confined to that band, otherwise ``"dense"``.  ``truncated``
    records that the basis was cut at the f-positivity cutoff.
    """

    dim: int
    entries: np.ndarray
    band: str = "dense"
    truncated: bool = False

    def diagonal(self) -> np.ndarray:
        return np.diag(self.entries).copy()

    def __matmul__(self, other):
        if isinstance(other, FockOperator):
            return FockOperator(self.dim, self.entries @ other.entries)
        return self.entries @ np.asarray(other)

    @property
    def T(self) -> "FockOperator":
        flip = {"sub": "super", "super": "sub"}.get(self.band, self.band)
        return FockOperator(self.dim, self.entries.conj().T, flip, self.truncated)


def ladder_ops(D: int):
    """Harmonic-oscillator ``a``, ``a^H`` and ``n`` truncated to ``D`` levels."""
    if D < 2:
        raise DomainError(f"need D >= 2, got {D}")
    a = np.diag(np.sqrt(np.arange(1.0, D)), 1)
    return (FockOperator(D, a, "super"), FockOperator(D, a.T.copy(), "sub"),
            FockOperator(D, np.diag(np.arange(D, dtype=float)), "diagonal"))


def _usable_dim(params, D):
    if params.undeformed:
        return D, False
    cutoff = f_cutoff(params)
    if D - 1 > cutoff:
        warnings.warn(f"dimension {D} runs past the f-positivity cutoff {cutoff}; "
                      f"truncating to {cutoff + 1}", TruncationWarning, stacklevel=3)
        return cutoff + 1, True
    return D, False


def deformed_ops(params: OscillatorParams, D: int):
    """``b|n> = sqrt(n) f(n) |n-1>`` and its transpose.

    A dimension beyond the cutoff is reduced to ``cutoff + 1`` and flagged in
    ``FockOperator.truncated`` (a :class:`TruncationWarning` is also issued).
    """
    if D < 2:
        raise DomainError(f"need D >= 2, got {D}")
    D, cut = _usable_dim(params, D)
    f = np.array([f_deformation(n, params) for n in range(1, D)])
    b = np.diag(np.sqrt(np.arange(1.0, D)) * f, 1)
    return FockOperator(D, b, "super", cut), FockOperator(D, b.T.copy(), "sub", cut)


def hamiltonian_fock(params: OscillatorParams, D: int) -> FockOperator:
    """``(hbar w / 2)(b b^H + b^H b)`` restricted to ``n < D - 1``.

    The last basis state only sees half of the symmetric product in a
    truncated space, so it is dropped: the result has dimension ``D - 1``
    and every diagonal entry equals a bound-level energy.
    """
    b, bd = deformed_ops(params, D)
    hw = params.hbar * params.omega
    H = 0.5 * hw * (b.entries @ bd.entries + bd.entries @ b.entries)
    k = b.dim - 1
    return FockOperator(k, H[:k, :k], "diagonal", b.truncated)


def commutator_bb(params: OscillatorParams, D: int, weighted: bool = True) -> FockOperator:
    """``[b, b^H]`` (times ``hbar w / 2`` when ``weighted``) for ``n < D - 1``."""
    b, bd = deformed_ops(params, D)
    C = b.entries @ bd.entries - bd.entries @ b.entries
    if weighted:
        C = 0.5 * params.hbar * params.omega * C
    k = b.dim - 1
    return FockOperator(k, C[:k, :k], "diagonal", b.truncated)


def commutator_bb_closed(n, params: OscillatorParams, weighted: bool = True):
    """Closed form of the commutator diagonal: ``(hbar w / (2 sqrt v))(S - (n + 1/2))``."""
    n = np.asarray(n, dtype=float)
    hw = params.hbar * params.omega
    if params.undeformed:
        out = np.ones_like(n)
    else:
        v = derive(params).v
        out = (math.sqrt(0.25 + v) - (n + 0.5)) / math.sqrt(v)
    if weighted:
        out = 0.5 * hw * out
    return out if out.ndim else float(out)


def poisson_coherent(beta: complex, D: int) -> np.ndarray:
    """Glauber coefficients ``exp(-|beta|^2/2) beta^n / sqrt(n!)`` (not renormalised)."""
    beta = complex(beta)
    c = np.empty(D, dtype=complex)
    c[0] = math.exp(-0.5 * abs(beta) ** 2)
    for n in range(1, D):
        c[n] = c[n - 1] * beta / math.sqrt(n)
    return c


@dataclass(frozen=True)
class DeformedCoherent:
    """Normalised eigenvector candidate of ``b`` with eigenvalue ``beta``.

    ``cutoff`` is the last index carried; ``tail_mass`` is
    ``sum_{n >= D-2} |c_n|^2``.
    """

    beta: complex
    coeffs: np.ndarray
    cutoff: int
    tail_mass: float
    note: str = ""

    @property
    def residual_bound(self) -> float:
        """``|beta| |c_last|``, the leakage through the truncation edge."""
        return abs(self.beta) * abs(self.coeffs[self.cutoff])


def coherent_type2(beta: complex, params: OscillatorParams, D: int) -> DeformedCoherent:
    """Coefficients ``c_{n+1} = beta c_n / (sqrt(n+1) f(n+1))`` with ``c_0 > 0``.

    Coefficients are built in log-magnitude form so large ``D`` cannot
    overflow, and the recursion stops at the f-positivity cutoff or when
    ``f`` vanishes.
    """
    if D < 4:
        raise DomainError(f"need D >= 4, got {D}")
    beta = complex(beta)
    D_eff, cut = _usable_dim(params, D)
    note = "truncated at the f-positivity cutoff" if cut else ""
    c = np.zeros(D_eff, dtype=complex)
    c[0] = 1.0
    last = D_eff - 1
    for n in range(D_eff - 1):
        fn = f_deformation(n + 1, params)
        if fn == 0.0:
            last = n
            note = f"f({n + 1}) = 0: finite-dimensional eigenproblem ends at n={n}"
            break
        c[n + 1] = c[n] * beta / (math.sqrt(n + 1) * fn)
    c /= np.linalg.norm(c)
    tail = float(np.sum(np.abs(c[max(D_eff - 2, 0):]) ** 2))
    return DeformedCoherent(beta, c, last, tail, note)


def eigen_residual(state: DeformedCoherent, params: OscillatorParams) -> float:
    """``||(b - beta) c|| / ||c||``."""
    b, _ = deformed_ops(params, state.coeffs.size)
    r = b.entries @ state.coeffs - state.beta * state.coeffs
    return float(np.linalg.norm(r) / np.linalg.norm(state.coeffs))
