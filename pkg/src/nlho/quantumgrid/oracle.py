"""Finite-difference oracle for the bound spectrum.

The canonical-chart Hamiltonian ``-hbar^2/(2m) d^2/dX^2 + (m w^2 / 2 lam) tanh^2(sqrt(lam) X)``
is discretised with the three-point stencil and diagonalised with
:func:`eigs_tridiagonal`.  Eigenvalues and eigenvectors are Richardson
extrapolated from grids with spacing ``h`` and ``h/2``; the raw coarse-grid
values are returned alongside so the extrapolation gain is visible.

The two physical-chart operator orderings are assembled on an ``x`` grid with
the same stencils; they are not symmetric but are diagonally similar to a
symmetric tridiagonal, which is what gets diagonalised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ..core import OscillatorParams, derive
from ..errors import DomainError
from ..spectrum import n_max
from .grid import Grid, GridOperator, d2_matrix, interior_slice
from .tridiag import count_below, eigs_tridiagonal, symmetrize_tridiagonal

__all__ = [
    "OracleSpectrum",
    "default_grid",
    "potential_X",
    "hamiltonian_X",
    "fd_spectrum",
    "count_bound_fd",
    "hamiltonian_orderings",
    "ordering_spectrum",
    "similarity_residual",
]


@dataclass(frozen=True)
class OracleSpectrum:
    """FD eigenpairs.

    ``vectors[:, n]`` lives on ``grid`` and is normalised so that
    ``sum |v|^2 h = 1``, with the sign fixed by the parity convention of
    :mod:`nlho.eigenfunctions` (even: positive at 0; odd: positive slope).
    """

    grid: Grid
    values: np.ndarray
    raw_values: np.ndarray
    vectors: np.ndarray | None
    extrapolated: bool


def default_grid(params: OscillatorParams, N: int = 4000, levels: int | None = None) -> Grid:
    """Box wide enough for the highest of the lowest ``levels`` states.

    ``L = max(b (sqrt(2n + 1) + 8), min(13 / kappa_n, 40 / sqrt(lam)))`` where
    ``n`` is the top requested level (all bound levels by default) and
    ``kappa_n`` its asymptotic decay rate.  The first term covers the
    Gaussian core, the second the exponential tail; for ``v = 100`` this
    gives ``L ~ 80``.
    """
    d = derive(params)
    b = math.sqrt(d.b2)
    if params.undeformed:
        n = 9 if levels is None else levels - 1
        return Grid(b * (math.sqrt(2 * n + 1) + 8.0), N)
    top = n_max(d.v)
    n = top if levels is None else min(levels - 1, top)
    sl = math.sqrt(params.lam)
    kappa = sl * (math.sqrt(0.25 + d.v) - n - 0.5)
    tail = 40.0 / sl if kappa <= 0 else min(13.0 / kappa, 40.0 / sl)
    return Grid(max(b * (math.sqrt(2 * n + 1) + 8.0), tail), N)


def potential_X(params: OscillatorParams, X):
    """``(m w^2 / 2 lam) tanh^2(sqrt(lam) X)``; the harmonic potential when ``lam = 0``."""
    X = np.asarray(X, dtype=float)
    k = params.m * params.omega**2
    if params.undeformed:
        return 0.5 * k * X * X
    return (0.5 * k / params.lam) * np.tanh(math.sqrt(params.lam) * X) ** 2


def hamiltonian_X(params: OscillatorParams, grid: Grid, order=2) -> GridOperator:
    """Grid Hamiltonian in the canonical chart (sparse; tridiagonal at order 2)."""
    D2 = d2_matrix(grid, order)
    V = potential_X(params, grid.points)
    kin = -(params.hbar**2 / (2.0 * params.m)) * D2
    if sp.issparse(kin):
        H = kin + sp.diags(V)
    else:
        H = kin + np.diag(V)
    return GridOperator(grid, H, "H_X")


def _tridiag_X(params, grid):
    c = params.hbar**2 / (2.0 * params.m * grid.h**2)
    d = 2.0 * c + potential_X(params, grid.points)
    e = np.full(grid.N - 1, -c)
    return d, e


def _unit_grid_vectors(V, grid):
    return V / math.sqrt(grid.h)


def _fix_signs(V, grid):
    mid = grid.N // 2
    for j in range(V.shape[1]):
        v = V[:, j]
        if j % 2 == 0:
            s = v[mid]
        else:
            s = v[mid + 1] - v[mid - 1]
        if s < 0:
            V[:, j] = -v
    return V


def fd_spectrum(params: OscillatorParams, grid: Grid, k: int, vectors: bool = True,
                richardson: bool = True) -> OracleSpectrum:
    """Lowest ``k`` FD eigenpairs of :func:`hamiltonian_X`.

    With ``richardson=True`` the pairs are also computed on ``grid.refined()``
    and combined as ``(4 f_{h/2} - f_h) / 3``; vectors are combined on the
    coarse points shared by both grids and renormalised.
    """
    d, e = _tridiag_X(params, grid)
    w, V = eigs_tridiagonal(d, e, k, vectors=vectors)
    if vectors:
        V = _fix_signs(_unit_grid_vectors(V, grid), grid)
    if not richardson:
        return OracleSpectrum(grid, w, w.copy(), V, False)
    fine = grid.refined()
    d2, e2 = _tridiag_X(params, fine)
    w2, V2 = eigs_tridiagonal(d2, e2, k, vectors=vectors)
    values = (4.0 * w2 - w) / 3.0
    if vectors:
        V2 = _fix_signs(_unit_grid_vectors(V2, fine), fine)
        Vx = (4.0 * V2[::2] - V) / 3.0
        Vx /= np.sqrt(np.sum(Vx * Vx, axis=0) * grid.h)
        V = Vx
    return OracleSpectrum(grid, values, w, V, True)


def count_bound_fd(params: OscillatorParams, grid: Grid) -> int:
    """Number of FD eigenvalues strictly below the continuum threshold ``m w^2 / 2 lam``."""
    if params.undeformed:
        raise DomainError("no continuum threshold on the undeformed branch")
    d, e = _tridiag_X(params, grid)
    return count_below(d, e, params.threshold)


def _ordering_bands(params, grid_x, which):
    lam = params.lam
    x = grid_x.points
    h = grid_x.h
    g = 1.0 + lam * x * x
    c = params.hbar**2 / (2.0 * params.m)
    if which == 1:
        c0 = np.zeros_like(x)
        c1 = lam * x
    elif which == 2:
        c0 = np.full_like(x, lam)
        c1 = 3.0 * lam * x
    else:
        raise DomainError(f"ordering must be 1 or 2, got {which!r}")
    V = 0.5 * params.m * params.omega**2 * x * x / g
    diag = -c * (-2.0 * g / h**2 + c0) + V
    upper = -c * (g[:-1] / h**2 + c1[:-1] / (2.0 * h))
    lower = -c * (g[1:] / h**2 - c1[1:] / (2.0 * h))
    return diag, upper, lower


def hamiltonian_orderings(params: OscillatorParams, grid_x: Grid):
    """Physical-chart Hamiltonians for the two momentum orderings.

    ``H1`` uses ``P1^2 = -hbar^2 (lam x d/dx + (1 + lam x^2) d^2/dx^2)`` and
    ``H2`` uses ``P2^2 = -hbar^2 (lam + 3 lam x d/dx + (1 + lam x^2) d^2/dx^2)``,
    each divided by ``2m`` and added to ``m w^2 x^2 / (2 (1 + lam x^2))``.
    Central differences of second order are used for both derivatives.
    """
    ops = []
    for which in (1, 2):
        diag, upper, lower = _ordering_bands(params, grid_x, which)
        M = sp.diags([lower, diag, upper], [-1, 0, 1], format="csr")
        ops.append(GridOperator(grid_x, M, f"H{which}"))
    return ops[0], ops[1]


def ordering_spectrum(params: OscillatorParams, grid_x: Grid, which: int, k: int,
                      richardson: bool = True):
    """Lowest ``k`` eigenvalues of ``H1`` or ``H2``; returns ``(values, raw_values)``."""

    def solve(grid):
        diag, upper, lower = _ordering_bands(params, grid, which)
        d, e = symmetrize_tridiagonal(diag, upper, lower)
        return eigs_tridiagonal(d, e, k, vectors=False)[0]

    w = solve(grid_x)
    if not richardson:
        return w, w.copy()
    w2 = solve(grid_x.refined())
    return (4.0 * w2 - w) / 3.0, w


def similarity_residual(params: OscillatorParams, grid_x: Grid) -> float:
    """``||F H1 F^-1 - H2|| / ||H2||`` on the interior index block, ``F = diag((1+lam x^2)^(-1/2))``."""
    H1, H2 = hamiltonian_orderings(params, grid_x)
    f = 1.0 / np.sqrt(1.0 + params.lam * grid_x.points**2)
    S = sp.diags(f) @ H1.entries @ sp.diags(1.0 / f)
    blk = interior_slice(grid_x)
    R = (S - H2.entries).tocsr()[blk, blk]
    ref = H2.entries.tocsr()[blk, blk]
    return float(sp.linalg.norm(R) / sp.linalg.norm(ref))
