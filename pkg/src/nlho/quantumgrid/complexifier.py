"""Quantum complexifier on the canonical-chart grid.

With ``b^2 = hbar / (m w)`` and ``D1`` the first-derivative matrix,

    M = sqrt(lam) X + i sqrt(lam) P / (m w) = sqrt(lam) (X + b^2 D1)

is real, and the complexified position operator is ``pre * sinh(M)``.  Two
prefactors appear in the closed forms:

* ``"summed"``: ``sqrt(m w / 2 lam)``, which is what the commutator series
  sums to;
* ``"bch"``: ``sqrt(m w / 2 lam) exp(lam b^2)``, the normal-ordered form
  whose ``[Z, Z^H]`` and symmetric product have the closed forms checked in
  :func:`commutator_check_Z` and :func:`symmetric_product_check`.

They differ by the constant ``exp(lam b^2)``; each check uses the prefactor
its closed form belongs to (see :func:`prefactor_gap`).

Operator identities are compared after compression onto a subspace of
smooth, well-resolved vectors (:func:`nlho.quantumgrid.grid.smooth_basis`);
the index-block norm is dominated by grid-scale modes that no
discretisation resolves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm

from ..core import OscillatorParams, derive
from ..errors import DomainError, RangeError
from .grid import Grid, GridOperator, GridState, d1_matrix, interior_slice, restricted_norm, smooth_basis
from .oracle import hamiltonian_X

__all__ = [
    "IdentityCheck",
    "position_op",
    "momentum_op",
    "quantum_A",
    "quantum_Z",
    "quantum_Z_series",
    "prefactor_gap",
    "commutator_check_Z",
    "commutator_limit_check",
    "symmetric_product_check",
    "series_check_Z",
    "heisenberg_check",
]

_EXP_LIMIT = 700.0


@dataclass(frozen=True)
class IdentityCheck:
    """Relative residual of an operator identity.

    ``residual`` is measured on the smooth subspace; ``block_residual`` is the
    same ratio on the interior index block, kept for reference.
    """

    residual: float
    block_residual: float
    reference_norm: float


def _dense(M):
    return M.toarray() if sp.issparse(M) else np.asarray(M)


def position_op(grid: Grid) -> GridOperator:
    return GridOperator(grid, sp.diags(np.asarray(grid.points, dtype=float), format="csr"), "X")


def momentum_op(grid: Grid, order=4, hbar: float = 1.0) -> GridOperator:
    """``P = -i hbar D1`` with Dirichlet closure; Hermitian for every order."""
    return GridOperator(grid, -1j * hbar * d1_matrix(grid, order), "P")


def quantum_A(params: OscillatorParams, grid: Grid, order=4) -> GridOperator:
    """Dimensionless ``A = sqrt(m w / 2 hbar) X + i P / sqrt(2 m w hbar) = (X + b^2 D1) / (sqrt(2) b)``."""
    b2 = derive(params).b2
    X = sp.diags(np.asarray(grid.points, dtype=float))
    D1 = d1_matrix(grid, order)
    if sp.issparse(D1):
        A = (X + b2 * D1) / math.sqrt(2.0 * b2)
    else:
        A = (X.toarray() + b2 * D1) / math.sqrt(2.0 * b2)
    return GridOperator(grid, A, "A")


def _M(params, grid, order, sign=1.0):
    if params.undeformed:
        raise DomainError("the complexified position operator needs lam > 0")
    b2 = derive(params).b2
    D1 = _dense(d1_matrix(grid, order))
    M = math.sqrt(params.lam) * (np.diag(grid.points) + sign * b2 * D1)
    if np.abs(M).sum(axis=0).max() > _EXP_LIMIT:
        raise RangeError("matrix exponential would overflow; reduce lam * L**2 or refine less")
    return M


def _sinhm(M):
    return 0.5 * (expm(M) - expm(-M))


def _coshm(M):
    return 0.5 * (expm(M) + expm(-M))


def _prefactor(params, prefactor):
    base = math.sqrt(params.m * params.omega / (2.0 * params.lam))
    if prefactor == "summed":
        return base
    if prefactor == "bch":
        return base * math.exp(params.lam * derive(params).b2)
    raise DomainError(f"prefactor must be 'bch' or 'summed', got {prefactor!r}")


def prefactor_gap(params: OscillatorParams) -> float:
    """Relative gap ``exp(lam b^2) - 1`` between the two prefactors."""
    return math.expm1(params.lam * derive(params).b2)


def quantum_Z(params: OscillatorParams, grid: Grid, order=2, prefactor: str = "bch") -> GridOperator:
    """Dense ``pre * sinh(M)`` by scaling-and-squaring matrix exponentials.

    Raises
    ------
    RangeError
        When ``||M||_1`` is large enough for ``exp(M)`` to overflow.
    """
    M = _M(params, grid, order)
    return GridOperator(grid, _prefactor(params, prefactor) * _sinhm(M), "Z")


def quantum_Z_series(params: OscillatorParams, grid: Grid, N_terms: int, order=2) -> GridOperator:
    """``sqrt(m w / 2 lam) sum_{n<N} (-b^2/2)^n / n! [S, D2]_(n)`` with ``S = sinh(sqrt(lam) X)``.

    ``[S, D2]_(n)`` is the ``n``-fold nested commutator ``[[S, D2], D2]...``
    with the second-derivative matrix of the same order, for which
    ``[D2, X] = 2 D1`` holds exactly.  The sum tends to ``quantum_Z`` with the
    ``"summed"`` prefactor until roundoff in the growing terms takes over
    (around 15-20 terms at desk sizes).
    """
    if N_terms < 1:
        raise DomainError("need at least one term")
    if params.undeformed:
        raise DomainError("the complexified position operator needs lam > 0")
    from .grid import d2_matrix

    b2 = derive(params).b2
    D2 = _dense(d2_matrix(grid, order))
    term = np.diag(np.sinh(math.sqrt(params.lam) * grid.points))
    total = term.copy()
    for n in range(1, N_terms):
        term = (term @ D2 - D2 @ term) * (-0.5 * b2 / n)
        total += term
    return GridOperator(grid, _prefactor(params, "summed") * total, "Z_series")


def _check(R, C, grid, width, K=8):
    Q = smooth_basis(grid, width, K)
    ref = restricted_norm(C, Q)
    blk = interior_slice(grid)
    Rd, Cd = _dense(R), _dense(C)
    block = float(np.linalg.norm(Rd[blk, blk]) / max(np.linalg.norm(Cd[blk, blk]), 1e-300))
    return IdentityCheck(restricted_norm(R, Q) / max(ref, 1e-300), block, ref)


def series_check_Z(params: OscillatorParams, grid: Grid, N_terms: int = 20, order=2) -> IdentityCheck:
    """Closed form (summed prefactor) against the commutator series."""
    Z = quantum_Z(params, grid, order, prefactor="summed").entries
    S = quantum_Z_series(params, grid, N_terms, order).entries
    return _check(Z - S, Z, grid, math.sqrt(derive(params).b2))


def commutator_check_Z(params: OscillatorParams, grid: Grid, order="sinc") -> IdentityCheck:
    """``[Z, Z^H]`` against ``(m w / 2 lam) e^{2 lam b^2} sinh(lam b^2) [cosh(2 sqrt(lam) X) + cos(2 sqrt(lam) P / m w)]``.

    ``cos(2 sqrt(lam) P / m w)`` is the matrix ``cosh(2 sqrt(lam) b^2 D1)``.
    The undeformed limit is handled by passing a small ``lam``.
    """
    b2 = derive(params).b2
    Z = quantum_Z(params, grid, order, prefactor="bch").entries
    C = Z @ Z.conj().T - Z.conj().T @ Z
    sl = math.sqrt(params.lam)
    D1 = _dense(d1_matrix(grid, order))
    lb = params.lam * b2
    k = params.m * params.omega / (2.0 * params.lam) * math.exp(2.0 * lb) * math.sinh(lb)
    F = k * (np.diag(np.cosh(2.0 * sl * grid.points)) + _coshm(2.0 * sl * b2 * D1))
    return _check(C - F, C, grid, math.sqrt(b2))


def commutator_limit_check(params: OscillatorParams, grid: Grid, order="sinc") -> IdentityCheck:
    """``[Z, Z^H]`` against ``hbar * I``, the undeformed limit (use a small ``lam``)."""
    Z = quantum_Z(params, grid, order, prefactor="bch").entries
    C = Z @ Z.conj().T - Z.conj().T @ Z
    return _check(C - params.hbar * np.eye(grid.N), C, grid, math.sqrt(derive(params).b2))


def symmetric_product_check(params: OscillatorParams, grid: Grid, order="sinc") -> IdentityCheck:
    """``(Z Z^H + Z^H Z)/2`` against ``(m w / 2 lam) e^{2 lam b^2} cosh(lam b^2) (cosh^2(sqrt(lam) X) - cos^2(sqrt(lam) P / m w))``."""
    b2 = derive(params).b2
    Z = quantum_Z(params, grid, order, prefactor="bch").entries
    Sym = 0.5 * (Z @ Z.conj().T + Z.conj().T @ Z)
    sl = math.sqrt(params.lam)
    D1 = _dense(d1_matrix(grid, order))
    lb = params.lam * b2
    k = params.m * params.omega / (2.0 * params.lam) * math.exp(2.0 * lb) * math.cosh(lb)
    Cm = _coshm(sl * b2 * D1)
    F = k * (np.diag(np.cosh(sl * grid.points) ** 2) - Cm @ Cm)
    return _check(Sym - F, Sym, grid, math.sqrt(b2))


def heisenberg_check(params: OscillatorParams, grid: Grid, psi, dts=(0.04, 0.02, 0.01), order=4):
    """Compare ``(1/i hbar)[A, H] psi`` with a central difference of ``A(t) psi``.

    ``A(t) = U^H A U`` with ``U = exp(-i H t / hbar)``.  Returns the residual
    norms for each ``dt`` and the observed convergence order between the last
    two.
    """
    H = hamiltonian_X(params, grid, order).dense()
    A = quantum_A(params, grid, order).dense()
    psi = np.asarray(psi, dtype=complex)
    exact = (A @ H - H @ A) @ psi / (1j * params.hbar)
    res = []
    for dt in dts:
        U = expm(-1j * H * dt / params.hbar)
        Ap = U.conj().T @ A @ U
        Am = U @ A @ U.conj().T
        approx = (Ap - Am) @ psi / (2.0 * dt)
        res.append(grid.norm(approx - exact) / grid.norm(exact))
    rate = math.log(res[-2] / res[-1]) / math.log(dts[-2] / dts[-1]) if len(res) > 1 else math.nan
    return np.array(res), rate
