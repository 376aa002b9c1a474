"""Uniform grids, grid operators and grid states.

Derivative matrices use Dirichlet closure: the function is taken to vanish
outside the ``N`` sample points, so the stencils are simply truncated at the
edges.  Three discretisations are available:

* ``2``: second-order central differences (tridiagonal),
* ``4``: fourth-order central differences (pentadiagonal),
* ``"sinc"``: the dense sinc-collocation (spectral) matrices.

For each choice ``[D2, X] = 2 D1`` holds exactly, which keeps the discrete
commutator algebra consistent with the continuum one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.sparse as sp
from numpy.polynomial.hermite import hermval

from ..errors import DomainError

__all__ = [
    "Grid",
    "GridOperator",
    "GridState",
    "DERIVATIVE_ORDERS",
    "d1_matrix",
    "d2_matrix",
    "smooth_basis",
    "interior_slice",
    "restricted_norm",
]

DERIVATIVE_ORDERS = (2, 4, "sinc")


@dataclass(frozen=True)
class Grid:
    """Symmetric uniform grid on ``[-L, L]`` with ``N`` points."""

    L: float
    N: int

    def __post_init__(self):
        if not (math.isfinite(self.L) and self.L > 0):
            raise DomainError(f"grid half-width must be positive, got {self.L!r}")
        if int(self.N) != self.N or self.N < 16:
            raise DomainError(f"grid needs N >= 16 points, got {self.N!r}")

    @property
    def h(self) -> float:
        return 2.0 * self.L / (self.N - 1)

    @cached_property
    def points(self) -> np.ndarray:
        X = np.linspace(-self.L, self.L, self.N)
        # exact mirror symmetry regardless of linspace rounding
        X = 0.5 * (X - X[::-1])
        X.setflags(write=False)
        return X

    def refined(self) -> "Grid":
        """Grid with half the spacing; every other point coincides with this one."""
        return Grid(self.L, 2 * self.N - 1)

    def inner(self, u, v) -> complex:
        return complex(np.vdot(u, v) * self.h)

    def norm(self, u) -> float:
        return math.sqrt(float(np.vdot(u, u).real) * self.h)


def _check_order(order):
    if order not in DERIVATIVE_ORDERS:
        raise DomainError(f"derivative order must be one of {DERIVATIVE_ORDERS}, got {order!r}")


def _sinc_k(N):
    i = np.arange(N)
    return i[:, None] - i[None, :]


def d1_matrix(grid: Grid, order=4):
    """First-derivative matrix (sparse for finite differences, dense for sinc)."""
    _check_order(order)
    N, h = grid.N, grid.h
    if order == 2:
        return sp.diags([-0.5, 0.5], [-1, 1], shape=(N, N), format="csr") / h
    if order == 4:
        c = np.array([1.0, -8.0, 8.0, -1.0]) / 12.0
        return sp.diags(list(c), [-2, -1, 1, 2], shape=(N, N), format="csr") / h
    k = _sinc_k(N)
    with np.errstate(divide="ignore", invalid="ignore"):
        D = np.where(k == 0, 0.0, (-1.0) ** k / (k * h))
    return D


def d2_matrix(grid: Grid, order=2):
    """Second-derivative matrix (sparse for finite differences, dense for sinc)."""
    _check_order(order)
    N, h = grid.N, grid.h
    if order == 2:
        return sp.diags([1.0, -2.0, 1.0], [-1, 0, 1], shape=(N, N), format="csr") / (h * h)
    if order == 4:
        c = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
        return sp.diags(list(c), [-2, -1, 0, 1, 2], shape=(N, N), format="csr") / (h * h)
    k = _sinc_k(N)
    with np.errstate(divide="ignore", invalid="ignore"):
        D = np.where(k == 0, -math.pi**2 / 3.0, -2.0 * (-1.0) ** k / (k * k)) / (h * h)
    return D


def _dense(M):
    return M.toarray() if sp.issparse(M) else np.asarray(M)


@dataclass(frozen=True)
class GridOperator:
    """Matrix acting on samples of a :class:`Grid`.

    ``hermitian_flag`` is computed from the entries at construction
    (``max|M - M^H| < 1e-12 ||M||``), never supplied by the caller.
    """

    grid: Grid
    entries: object
    name: str = ""
    hermitian_flag: bool = field(init=False)

    def __post_init__(self):
        M = self.entries
        if sp.issparse(M):
            M = M.tocsr()
            object.__setattr__(self, "entries", M)
            diff = abs(M - M.conj().T).max() if M.nnz else 0.0
            scale = abs(M).max() if M.nnz else 0.0
        else:
            M = np.asarray(M)
            object.__setattr__(self, "entries", M)
            diff = np.abs(M - M.conj().T).max()
            scale = np.abs(M).max()
        # max-abs entry is within a factor sqrt(N) of the spectral norm
        object.__setattr__(self, "hermitian_flag", bool(diff <= 1e-12 * scale))

    @property
    def banded(self) -> bool:
        return sp.issparse(self.entries)

    @property
    def shape(self):
        return self.entries.shape

    def dense(self) -> np.ndarray:
        return _dense(self.entries)

    def apply(self, values) -> np.ndarray:
        return self.entries @ np.asarray(values)

    def __matmul__(self, other):
        if isinstance(other, GridOperator):
            return GridOperator(self.grid, self.entries @ other.entries)
        if isinstance(other, GridState):
            return GridState(self.grid, self.apply(other.values))
        return self.apply(other)

    def adjoint(self) -> "GridOperator":
        return GridOperator(self.grid, self.entries.conj().T, self.name + "^H" if self.name else "")


@dataclass(frozen=True)
class GridState:
    """Sampled wavefunction; ``norm`` is the grid integral ``sum |psi|^2 h``."""

    grid: Grid
    values: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.grid.N,):
            raise DomainError(f"state needs {self.grid.N} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise DomainError("state contains non-finite samples")
        object.__setattr__(self, "values", v)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.h)

    @property
    def boundary_ratio(self) -> float:
        """``max(|psi_0|, |psi_{N-1}|) / max|psi|``; small means the box is adequate."""
        peak = np.abs(self.values).max()
        if peak == 0:
            return 0.0
        return float(max(abs(self.values[0]), abs(self.values[-1])) / peak)

    def normalized(self) -> "GridState":
        return GridState(self.grid, self.values / math.sqrt(self.norm), dict(self.meta))


def interior_slice(grid: Grid) -> slice:
    """Index block ``N/8 .. 7N/8`` used to exclude stencil-boundary artefacts."""
    return slice(grid.N // 8, 7 * grid.N // 8)


def smooth_basis(grid: Grid, width: float, K: int = 8) -> np.ndarray:
    """Orthonormal (in the grid inner product, times sqrt(h)) basis of smooth vectors.

    The first ``K`` Hermite functions of the given width, sampled and
    QR-orthonormalised.  Operator identities that only hold on well-resolved
    functions are compared after compression onto this subspace.
    """
    y = grid.points / width
    cols = [hermval(y, [0.0] * n + [1.0]) * np.exp(-0.5 * y * y) for n in range(K)]
    Q, _ = np.linalg.qr(np.array(cols).T * math.sqrt(grid.h))
    return Q


def restricted_norm(M, Q) -> float:
    """Frobenius norm of ``Q^H M Q``."""
    M = _dense(M)
    return float(np.linalg.norm(Q.conj().T @ M @ Q))
