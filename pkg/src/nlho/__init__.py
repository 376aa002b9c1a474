"""Classical and quantum one-dimensional nonlinear harmonic oscillator.

Submodules
----------
core            parameters and chart maps
spectrum        closed-form levels and the deformation function ``f(n)``
eigenfunctions  Jacobi-polynomial eigenfunctions
classical       orbits, Poisson brackets and the classical complexifier
quantumgrid     finite-difference oracle, quantum complexifier, coherent states
fock            deformed ladder operators in a truncated Fock space
validation      acceptance suite
cli             command-line front end
"""
__version__ = "0.1.0"

from .core import OscillatorParams, DerivedParams, derive, x_to_X, X_to_x, p_to_P, P_to_p
from .errors import (NLHOError, DomainError, OutOfSpectrumError, AlgebraTruncationError, IntegrationError,
                     QuadratureError, SolverError, PropagationError, RangeError)
from .spectrum import (n_max, epsilon_level, energy_level, bound_state_count, f_deformation, f_cutoff,
                       hypergeometric_params, level_table)
from .eigenfunctions import Eigenfunction, eigenfunction, evaluate, evaluate_x, overlap
from ._kernels import BACKEND

__all__ = [
    "__version__", "BACKEND",
    "OscillatorParams", "DerivedParams", "derive", "x_to_X", "X_to_x", "p_to_P", "P_to_p",
    "NLHOError", "DomainError", "OutOfSpectrumError", "AlgebraTruncationError", "IntegrationError",
    "QuadratureError", "SolverError", "PropagationError", "RangeError",
    "n_max", "epsilon_level", "energy_level", "bound_state_count", "f_deformation", "f_cutoff",
    "hypergeometric_params", "level_table",
    "Eigenfunction", "eigenfunction", "evaluate", "evaluate_x", "overlap",
]
