"""Exception hierarchy shared by every module of the package."""


class BrounckerError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BrounckerError, ValueError):
    """Arguments fall outside the hypothesis under which a formula holds.

    ``hypothesis`` holds a human-readable statement of the violated condition
    so that front ends can report it verbatim.
    """

    def __init__(self, message, hypothesis=None):
        super().__init__(message)
        self.hypothesis = hypothesis or message


class NonPositiveElement(DomainError):
    """A partial numerator or denominator was not strictly positive."""


class ZeroParameter(BrounckerError, ValueError):
    """An equivalence-transform parameter was zero."""


class DivisionByZeroDenominator(BrounckerError, ZeroDivisionError):
    """An intermediate denominator of a backward evaluation vanished."""


class NotConverged(BrounckerError, ArithmeticError):
    """An iterative method stopped before reaching the requested tolerance.

    The best available result is attached as ``best``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class MonotonicityViolated(BrounckerError, ValueError):
    """A function required to be positive and decreasing was not."""


class QuadratureFailure(BrounckerError, ArithmeticError):
    """Adaptive quadrature could not certify the requested accuracy."""
