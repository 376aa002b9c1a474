"""Closed-form bound-state spectrum and the Fock deformation function.

With ``S = sqrt(1/4 + v)`` the dimensionless levels are
``eps_n = v - (S - (n + 1/2))**2`` and the physical energies are
``E_n = lam hbar^2 / (2 m) * eps_n``.  Both are evaluated through the
factorised form ``(n + 1/2 - q) (sqrt(v) + S - 1/2 - n)`` with
``q = 1/4 / (S + sqrt(v))``, arranged so that neither the ``lam -> 0`` nor
the ``v -> 0`` limit carries cancellation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import OscillatorParams, derive
from .errors import AlgebraTruncationError, DomainError, OutOfSpectrumError

__all__ = [
    "UNBOUNDED",
    "LevelRecord",
    "n_max",
    "epsilon_level",
    "energy_level",
    "bound_state_count",
    "f_deformation",
    "f_cutoff",
    "hypergeometric_params",
    "decay_exponent",
    "level_record",
    "level_table",
]

#: returned by :func:`bound_state_count` on the undeformed branch
UNBOUNDED = math.inf


@dataclass(frozen=True)
class LevelRecord:
    n: int
    epsilon_n: float
    E_n: float
    f_n: float
    alpha: float
    beta: float
    gamma: float
    sigma: float


def _check_v(v):
    if not math.isfinite(v) or v < 0:
        raise DomainError(f"v must be finite and >= 0, got {v!r}")


def n_max(v: float) -> int:
    """Largest bound level index: ``floor(sqrt(1/4 + v) - 1/2)``, ties counted as bound."""
    _check_v(v)
    return int(math.floor(math.sqrt(0.25 + v) - 0.5))


def _factors(n, v):
    S = math.sqrt(0.25 + v)
    rv = math.sqrt(v)
    # S - 1/2 = v / (S + 1/2) and 1/2 - q = ((S - 1/2) + rv) / (2 (S + rv)) avoid cancellation as v -> 0
    s_half = v / (S + 0.5)
    return n + 0.5 * (s_half + rv) / (S + rv), rv + s_half - n


def epsilon_level(n: int, v: float, strict: bool = True) -> float:
    """Dimensionless level ``eps_n``.

    With ``strict=False`` the formula is evaluated for any ``n >= 0``, which is
    how the ``v = 0`` identity ``eps_n = -n**2`` can be inspected beyond the
    single admissible level.
    """
    _check_v(v)
    if n < 0:
        raise OutOfSpectrumError(n, n_max(v))
    if strict and n > n_max(v):
        raise OutOfSpectrumError(n, n_max(v))
    a, b = _factors(n, v)
    return a * b


def energy_level(n: int, params: OscillatorParams) -> float:
    """Physical energy ``E_n``; ``(n + 1/2) hbar omega`` on the undeformed branch."""
    hw = params.hbar * params.omega
    if n < 0:
        raise OutOfSpectrumError(n, None)
    if params.undeformed:
        return (n + 0.5) * hw
    v = derive(params).v
    if n > n_max(v):
        raise OutOfSpectrumError(n, n_max(v))
    a, b = _factors(n, v)
    # lam hbar^2 / 2m == hbar omega / (2 sqrt v)
    return 0.5 * hw * a * (b / math.sqrt(v))


def bound_state_count(params: OscillatorParams):
    if params.undeformed:
        return UNBOUNDED
    return n_max(derive(params).v) + 1


def f_cutoff(params: OscillatorParams):
    """Largest ``n`` with ``f(n)**2 >= 0``, i.e. ``floor(sqrt(1 + 4 v))``."""
    if params.undeformed:
        return UNBOUNDED
    return int(math.floor(math.sqrt(1.0 + 4.0 * derive(params).v)))


def _f_squared(n, v):
    rv = math.sqrt(v)
    return math.sqrt(0.25 + v) / rv - n / (2.0 * rv)


def f_deformation(n: int, params: OscillatorParams) -> float:
    """Positive root ``f(n) = (sqrt(1/(4v) + 1) - n / (2 sqrt v))**(1/2)``."""
    if n < 0:
        raise DomainError(f"n must be >= 0, got {n}")
    if params.undeformed:
        return 1.0
    v = derive(params).v
    cutoff = f_cutoff(params)
    if n > cutoff:
        raise AlgebraTruncationError(n, cutoff)
    return math.sqrt(max(_f_squared(n, v), 0.0))


def hypergeometric_params(n: int, params: OscillatorParams):
    """Return ``(alpha, beta, gamma, sigma)`` for level ``n``.

    The root of ``v - eps_n`` entering ``alpha`` and ``beta`` is taken on the
    branch ``(n + 1/2) - sqrt(1/4 + v)`` selected by ``beta = n + 1``.
    """
    if params.undeformed:
        raise DomainError("hypergeometric parameters diverge on the undeformed branch")
    d = derive(params)
    if n < 0 or n > n_max(d.v):
        raise OutOfSpectrumError(n, n_max(d.v))
    root = (n + 0.5) - math.sqrt(0.25 + d.v)
    sigma = d.sigma
    return 2 * sigma - 0.5 - root, 2 * sigma - 0.5 + root, 2 * sigma, sigma


def decay_exponent(n: int, v: float) -> float:
    """``sqrt(v - eps_n) = sqrt(1/4 + v) - (n + 1/2)``; asymptotic decay rate in ``sqrt(lam) X``."""
    return math.sqrt(0.25 + v) - (n + 0.5)


def level_record(n: int, params: OscillatorParams) -> LevelRecord:
    v = derive(params).v
    alpha, beta, gamma, sigma = hypergeometric_params(n, params)
    return LevelRecord(
        n=n,
        epsilon_n=epsilon_level(n, v),
        E_n=energy_level(n, params),
        f_n=f_deformation(n, params),
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        sigma=sigma,
    )


def level_table(params: OscillatorParams) -> list[LevelRecord]:
    """Records for every bound level (deformed branch only)."""
    if params.undeformed:
        raise DomainError("the undeformed spectrum is unbounded; use energy_level directly")
    return [level_record(n, params) for n in range(bound_state_count(params))]
