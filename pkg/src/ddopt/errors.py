"""Exception types raised across the package."""


class SequenceError(ValueError):
    """Base class for invalid pulse-timing input."""


class NonMonotonic(SequenceError):
    pass


class OutOfRange(SequenceError):
    pass


class TooClose(SequenceError):
    pass


class InvalidSpectrum(ValueError):
    pass


class NumericalFailure(ArithmeticError):
    """A numerical routine did not reach its accuracy target.

    The best available estimate and its error bound are kept on the
    exception so callers can still inspect them.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
