"""
Exception hierarchy shared by the Krätzel tools.

Every module logs the failure and then raises one of these, so callers (the
CLI above all) can map them onto exit codes without string matching.
"""

from typing import Any, Optional


class KratzelError(Exception):
    """Root of all errors raised by this package."""


class DomainError(KratzelError, ValueError):
    """A precondition on the arguments was violated.

    The message names the violated precondition, e.g. "x must be positive".
    """


class AccuracyError(KratzelError, ArithmeticError):
    """A numerical procedure did not reach the requested tolerance.

    Attributes:
        best_estimate: The last (unconverged) result, usually an EvalResult.
    """

    def __init__(self, message: str, best_estimate: Optional[Any] = None):
        super().__init__(message)
        self.best_estimate = best_estimate


class InputFormatError(KratzelError, ValueError):
    """Malformed user input file.

    Attributes:
        line: 1-based line number of the offending row (header is line 1).
    """

    def __init__(self, message: str, line: Optional[int] = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
