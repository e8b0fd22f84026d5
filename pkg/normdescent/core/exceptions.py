"""Error hierarchy shared by the library, the CLI and the HTTP API.

Every class carries the process exit code the CLI reports for it and the
HTTP status the API answers with.
"""
from typing import Any, Optional


class NormDescentError(Exception):
    exit_code: int = 1
    status_code: int = 500

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class InvalidArgumentError(NormDescentError, ValueError):
    exit_code = 2
    status_code = 422


class ShapeError(InvalidArgumentError):
    pass


class EmptyFactorsError(InvalidArgumentError):
    """Raised when a factorization is requested for the zero matrix."""


class UnsupportedNormError(NormDescentError):
    exit_code = 2
    status_code = 422


class NotPositiveSemidefiniteError(NormDescentError):
    pass


class SingularMatrixError(NormDescentError):
    pass


class ConvergenceError(NormDescentError):
    def __init__(self, message: str, estimate: Optional[float] = None, iterations: int = 0):
        super().__init__(message)
        self.estimate = estimate
        self.iterations = iterations


class ConfigError(InvalidArgumentError):
    def __init__(self, message: str, errors: Optional[list] = None):
        super().__init__(message)
        self.errors = errors or []


class NumericalAbort(NormDescentError):
    exit_code = 3

    def __init__(self, message: str, step: int = -1, record: Optional[Any] = None):
        super().__init__(message)
        self.step = step
        self.record = record


def exit_code_for(exc: BaseException) -> int:
    """Process exit code the CLI reports for ``exc``."""
    if isinstance(exc, NormDescentError):
        return exc.exit_code
    if isinstance(exc, ValueError):
        return InvalidArgumentError.exit_code
    return NormDescentError.exit_code
