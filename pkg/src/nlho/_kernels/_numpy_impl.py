"""Pure numpy/scipy fallback kernels.

Bisection runs all requested eigenvalue indices in lockstep so the Python
loop is over the matrix rows only, with each iteration vectorised across
indices.
"""
import numpy as np
from scipy.linalg import solve_banded

from . import _loops

NAME = "numpy"

integrate_leapfrog = _loops.integrate_leapfrog
integrate_rk4 = _loops.integrate_rk4


def _counts(d, e2, xs, pivmin):
    q = d[0] - xs
    q = np.where(np.abs(q) < pivmin, -pivmin, q)
    count = (q < 0).astype(np.int64)
    for i in range(1, d.shape[0]):
        q = (d[i] - xs) - e2[i - 1] / q
        q = np.where(np.abs(q) < pivmin, -pivmin, q)
        count += q < 0
    return count


def sturm_count(d, e2, x, pivmin):
    return int(_counts(d, e2, np.atleast_1d(np.asarray(x, dtype=float)), pivmin)[0])


def bisect_eigenvalues(d, e2, k_lo, k_hi, lower, upper, abstol, pivmin):
    eps = np.finfo(float).eps
    ks = np.arange(k_lo, k_hi)
    lo = np.full(ks.shape, float(lower))
    hi = np.full(ks.shape, float(upper))
    for _ in range(400):
        active = (hi - lo) > abstol + 2.0 * eps * np.maximum(np.abs(lo), np.abs(hi))
        if not active.any():
            break
        mid = 0.5 * (lo + hi)
        active &= (mid > lo) & (mid < hi)
        if not active.any():
            break
        c = _counts(d, e2, mid[active], pivmin)
        upper_move = c > ks[active]
        idx = np.flatnonzero(active)
        hi[idx[upper_move]] = mid[active][upper_move]
        lo[idx[~upper_move]] = mid[active][~upper_move]
    return 0.5 * (lo + hi)


def tridiag_solve(dl, d, du, b):
    scale = max(np.abs(d).max(), np.abs(dl).max(initial=0.0), np.abs(du).max(initial=0.0), 1e-300)
    ab = np.zeros((3, d.shape[0]))
    ab[0, 1:] = du
    ab[1] = d
    ab[2, :-1] = dl
    try:
        return solve_banded((1, 1), ab, b, check_finite=False)
    except np.linalg.LinAlgError:
        ab[1] = np.where(d == 0.0, np.finfo(float).eps * scale, d)
        ab[1] += np.finfo(float).eps * scale
        return solve_banded((1, 1), ab, b, check_finite=False)
