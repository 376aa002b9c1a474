"""Exception hierarchy shared by all nlho modules."""


class NLHOError(Exception):
    """Base class for library errors."""


class DomainError(NLHOError, ValueError):
    """Input outside the admissible parameter domain."""


class OutOfSpectrumError(NLHOError, ValueError):
    """Requested level index exceeds the bound-state range."""

    def __init__(self, n, n_max):
        super().__init__(f"level n={n} is outside the bound spectrum (n_max={n_max})")
        self.n = n
        self.n_max = n_max


class AlgebraTruncationError(NLHOError, ValueError):
    """The deformation function f(n) has no real value beyond ``cutoff``."""

    def __init__(self, n, cutoff):
        super().__init__(f"f(n) is not real for n={n}; positivity cutoff is {cutoff}")
        self.n = n
        self.cutoff = cutoff


class IntegrationError(NLHOError, ArithmeticError):
    """Non-finite state produced while integrating an orbit."""

    def __init__(self, step):
        super().__init__(f"non-finite phase state at step {step}")
        self.step = step


class QuadratureError(NLHOError, ArithmeticError):
    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class SolverError(NLHOError, ArithmeticError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class PropagationError(NLHOError, ArithmeticError):
    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class RangeError(NLHOError, OverflowError):
    """Matrix exponential argument too large to represent."""
