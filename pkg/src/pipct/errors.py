"""Exception types raised by the approximation routines."""


class ApproximationError(Exception):
    """Base class for all errors raised by :mod:`pipct`."""


class InvalidArgumentError(ApproximationError, ValueError):
    """An argument violates a documented precondition."""


class OutOfDomainError(ApproximationError, ValueError):
    """An evaluation point lies outside the interval of the approximant."""


class EvaluationError(ApproximationError):
    """The target function returned a non-finite value.

    Attributes:
        point: the abscissa at which the offending value was produced.
        value: the value returned there.
    """

    def __init__(self, point, value, message=None):
        self.point = float(point)
        self.value = value
        super().__init__(message or f"non-finite function value {value!r} at x={self.point!r}")


class NumericalError(ApproximationError, ArithmeticError):
    """A linear-algebra kernel failed to produce a result."""


class PoleError(ApproximationError, ZeroDivisionError):
    """The denominator vanishes exactly at an evaluation point."""


class CellError(ApproximationError):
    """Wraps a failure while building one cell of a piecewise approximant."""

    def __init__(self, cell_index, interval, cause):
        self.cell_index = cell_index
        self.interval = interval
        self.cause = cause
        super().__init__(f"cell {cell_index} on [{interval.a!r}, {interval.b!r}]: {cause}")
