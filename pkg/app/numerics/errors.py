"""Exceptions and warnings raised by the numerics package."""


class SplineLabError(Exception):
    """Base class for every error raised by splinelab."""


class PreconditionError(SplineLabError, ValueError):
    """An operation was called with inputs outside its domain."""


class NonMonotoneError(PreconditionError):
    """Mesh widths are zero or change sign."""


class TooFewNodesError(PreconditionError):
    """The mesh has fewer intervals than the operation needs."""

    def __init__(self, needed: int, got: int, what: str = "intervals"):
        self.needed = needed
        self.got = got
        super().__init__(f"need at least {needed} {what}, got {got}")


class DegenerateIntervalError(PreconditionError):
    """The interval [a, b] has zero length."""


class IndexOutOfRangeError(PreconditionError, IndexError):
    """An interior node index is outside 1..n-1."""


class ZeroWidthError(PreconditionError):
    """A step width of zero was supplied."""


class OutOfDomainError(PreconditionError):
    """Evaluation point lies outside [tau_0, tau_n]."""


class SideUnavailableError(PreconditionError):
    """A one-sided limit was requested where no piece exists on that side."""


class NonUniformUnsupportedError(PreconditionError):
    """The scheme is only defined on uniform meshes."""


class InsufficientSweepError(PreconditionError):
    """A truncation probe did not get enough usable step sizes."""


class UnknownFunctionError(PreconditionError, KeyError):
    """No test function is registered under the requested name."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ReducibleError(PreconditionError):
    """A zero off-diagonal entry makes the tridiagonal TN criterion inapplicable."""

    def __init__(self, position: int, which: str):
        self.position = position
        self.which = which
        super().__init__(f"{which} entry {position} is zero; matrix is reducible")


class SingularPivotError(SplineLabError, ArithmeticError):
    """Elimination without pivoting met a (numerically) zero pivot."""

    def __init__(self, row: int, pivot: float):
        self.row = row
        self.pivot = pivot
        super().__init__(f"zero pivot {pivot!r} at row {row}")


class InputFormatError(SplineLabError):
    """A CSV or JSON input could not be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class ExtrapolationWarning(UserWarning):
    """A piecewise formula was evaluated outside its own subinterval."""
