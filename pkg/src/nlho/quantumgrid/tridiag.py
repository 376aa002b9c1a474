"""Symmetric tridiagonal eigensolver: Sturm bisection plus inverse iteration."""
from __future__ import annotations

import math

import numpy as np

from .. import _kernels
from ..errors import DomainError, SolverError

__all__ = ["eigs_tridiagonal", "count_below", "symmetrize_tridiagonal"]

_EPS = np.finfo(float).eps


def _validate(d, e):
    d = np.ascontiguousarray(d, dtype=float)
    e = np.ascontiguousarray(e, dtype=float)
    if d.ndim != 1 or e.shape != (max(d.shape[0] - 1, 0),):
        raise DomainError("need diagonal of length N and off-diagonal of length N-1")
    if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
        raise DomainError("tridiagonal entries must be finite")
    return d, e


def _bounds(d, e):
    """Gershgorin interval and the matrix scale ``max row sum``."""
    r = np.zeros_like(d)
    r[:-1] += np.abs(e)
    r[1:] += np.abs(e)
    lo = float(np.min(d - r))
    hi = float(np.max(d + r))
    tnorm = max(abs(lo), abs(hi), 1e-300)
    pad = 2.0 * _EPS * tnorm * d.shape[0]
    return lo - pad, hi + pad, tnorm


def _pivmin(e2):
    return max(float(np.max(e2, initial=0.0)), 1.0) * np.finfo(float).tiny * 4


def count_below(d, e, x) -> int:
    """Number of eigenvalues strictly below ``x`` (Sturm count)."""
    d, e = _validate(d, e)
    e2 = e * e
    return int(_kernels.sturm_count(d, e2, float(x), _pivmin(e2)))


def symmetrize_tridiagonal(d, upper, lower):
    """Similar symmetric tridiagonal of a real one with ``upper * lower > 0``.

    Returns the diagonal and the off-diagonal ``sign(upper) sqrt(upper lower)``.
    """
    upper = np.asarray(upper, dtype=float)
    lower = np.asarray(lower, dtype=float)
    prod = upper * lower
    if np.any(prod <= 0):
        raise DomainError("tridiagonal matrix is not sign-symmetric; no real diagonal similarity")
    return np.asarray(d, dtype=float), np.sign(upper) * np.sqrt(prod)


def _tri_apply(d, e, v):
    out = d * v
    out[:-1] += e * v[1:]
    out[1:] += e * v[:-1]
    return out


def eigs_tridiagonal(d, e, k: int, vectors: bool = True, max_iter: int = 8):
    """Lowest ``k`` eigenpairs of the symmetric tridiagonal matrix ``(d, e)``.

    Eigenvalues come from Sturm-sequence bisection to full precision; vectors
    from inverse iteration with explicit reorthogonalisation inside clusters
    of close eigenvalues.

    Parameters
    ----------
    d, e : array_like
        Diagonal (length N) and off-diagonal (length N-1).
    k : int
        Number of lowest eigenpairs, ``1 <= k <= N``.
    vectors : bool
        Skip inverse iteration when False.

    Returns
    -------
    values : ndarray, shape (k,)
    vecs : ndarray, shape (N, k), or None
        Unit-norm columns (Euclidean norm).

    Raises
    ------
    SolverError
        If an eigenvector residual stays above ``1e-10 ||T||`` after
        ``max_iter`` iterations.
    """
    d, e = _validate(d, e)
    N = d.shape[0]
    if not 1 <= k <= N:
        raise DomainError(f"k must be in [1, {N}], got {k}")
    e2 = e * e
    lower, upper, tnorm = _bounds(d, e)
    abstol = 2.0 * np.finfo(float).tiny
    values = np.asarray(_kernels.bisect_eigenvalues(d, e2, 0, k, lower, upper, abstol, _pivmin(e2)))
    if not vectors:
        return values, None

    rng = np.random.default_rng(12345)
    vecs = np.empty((N, k))
    tol = 1e-10 * tnorm
    cluster_gap = 1e-3 * tnorm
    sep = 10.0 * _EPS * tnorm
    cluster_start = 0
    shifted = values.copy()
    for j in range(k):
        if j > 0 and values[j] - values[j - 1] > cluster_gap:
            cluster_start = j
        # nudge exact repeats apart so inverse iteration picks new directions
        if j > cluster_start and shifted[j] - shifted[j - 1] < sep:
            shifted[j] = shifted[j - 1] + sep
        lam = shifted[j]
        diag = d - lam
        v = rng.uniform(-1.0, 1.0, N)
        v /= np.linalg.norm(v)
        ok = False
        for _ in range(max_iter):
            y = np.asarray(_kernels.tridiag_solve(e.copy(), diag.copy(), e.copy(), v))
            if cluster_start < j:
                C = vecs[:, cluster_start:j]
                y -= C @ (C.T @ y)
                y -= C @ (C.T @ y)
            nrm = np.linalg.norm(y)
            if not math.isfinite(nrm) or nrm == 0.0:
                break
            v = y / nrm
            res = np.linalg.norm(_tri_apply(d, e, v) - values[j] * v)
            if res < tol:
                ok = True
                break
        if not ok:
            raise SolverError(f"inverse iteration did not converge for eigenvalue {j}", j)
        # deterministic sign: first significant component positive
        idx = int(np.argmax(np.abs(v) > 1e-3 * np.abs(v).max()))
        if v[idx] < 0:
            v = -v
        vecs[:, j] = v
    return values, vecs
