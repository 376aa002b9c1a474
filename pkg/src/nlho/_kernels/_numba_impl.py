"""numba-compiled kernels."""
from numba import njit

from . import _loops

NAME = "numba"

sturm_count = njit(cache=True)(_loops.sturm_count)
bisect_eigenvalues = njit(cache=True)(_loops.bisect_eigenvalues)
tridiag_solve = njit(cache=True)(_loops.tridiag_solve)
integrate_leapfrog = njit(cache=True)(_loops.integrate_leapfrog)
integrate_rk4 = njit(cache=True)(_loops.integrate_rk4)
