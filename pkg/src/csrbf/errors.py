"""Exception hierarchy shared by all modules."""


class CSRBFError(Exception):
    """Base class for every error raised by this package."""


class DomainError(CSRBFError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InputError(CSRBFError, ValueError):
    """Malformed or inconsistent user input (landmarks, regions, images)."""


class LandmarkParseError(InputError):
    """A landmark file could not be parsed.

    ``lineno`` is the 1-based line of the offending record, or ``None`` when
    the problem concerns the whole file.
    """

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ConditioningError(CSRBFError, ArithmeticError):
    """The interpolation matrix is numerically not positive definite.

    ``pivot`` is the 0-based index of the leading minor at which the
    Cholesky factorization broke down (``None`` for residual failures).
    """

    def __init__(self, message, pivot=None):
        self.pivot = pivot
        super().__init__(message)


class SingularConfigurationError(CSRBFError, ArithmeticError):
    """A closed-form coefficient formula has a vanishing denominator."""
