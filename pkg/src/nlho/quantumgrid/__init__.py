"""Grid discretisations: FD oracle, tridiagonal eigensolver, complexifier and coherent states."""
from .coherent import *  # noqa: F401,F403
from .complexifier import *  # noqa: F401,F403
from .grid import *  # noqa: F401,F403
from .oracle import *  # noqa: F401,F403
from .tridiag import *  # noqa: F401,F403
from . import coherent, complexifier, grid, oracle, tridiag

__all__ = coherent.__all__ + complexifier.__all__ + grid.__all__ + oracle.__all__ + tridiag.__all__
