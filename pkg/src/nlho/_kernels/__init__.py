"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The numba backend is used when numba imports cleanly, unless the environment
variable ``NLHO_DISABLE_NUMBA`` is set to ``1``/``true``/``yes``.  Both
backends expose the same functions; :func:`get_backend` returns either one
explicitly (tests and the benchmark compare them).
"""
import importlib
import os

_DISABLED = os.environ.get("NLHO_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")


def get_backend(name):
    if name == "numba":
        return importlib.import_module("._numba_impl", __name__)
    if name == "numpy":
        return importlib.import_module("._numpy_impl", __name__)
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    if _DISABLED:
        return get_backend("numpy")
    try:
        return get_backend("numba")
    except ImportError:
        return get_backend("numpy")


_impl = _select()

BACKEND = _impl.NAME
sturm_count = _impl.sturm_count
bisect_eigenvalues = _impl.bisect_eigenvalues
tridiag_solve = _impl.tridiag_solve
integrate_leapfrog = _impl.integrate_leapfrog
integrate_rk4 = _impl.integrate_rk4

__all__ = [
    "BACKEND",
    "get_backend",
    "sturm_count",
    "bisect_eigenvalues",
    "tridiag_solve",
    "integrate_leapfrog",
    "integrate_rk4",
]
