"""Exception hierarchy shared by all modules."""


class EntropicError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EntropicError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(EntropicError, ValueError):
    """A point lies outside the sampled range of a grid state."""


class NumericError(EntropicError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance."""

    def __init__(self, message, residual=float("nan")):
        super().__init__(f"{message} (residual estimate {residual:.3e})")
        self.residual = residual


class ResolutionError(EntropicError):
    """A grid is too coarse or too narrow for a faithful momentum transform."""

    def __init__(self, message, p_max):
        super().__init__(f"{message}; maximum faithful |p| is {p_max:.6g}")
        self.p_max = p_max


class TruncationError(NumericError):
    """The full-line bin sum could not be truncated within the index cap."""

    def __init__(self, message, achieved_tail):
        super().__init__(message, residual=achieved_tail)
        self.achieved_tail = achieved_tail


class DegenerateTailError(EntropicError):
    """The mass outside a detector window is too small to condition on."""
