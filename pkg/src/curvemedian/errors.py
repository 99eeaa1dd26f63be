"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: invalid input -> 2, capacity -> 3,
verification failure -> 4.
"""


class CurveMedianError(Exception):
    """Base class for all library errors."""


class InvalidInputError(CurveMedianError, ValueError):
    """Raised when an argument violates a documented precondition."""


class ParseError(InvalidInputError):
    """Raised on malformed dataset files; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CapacityError(CurveMedianError, RuntimeError):
    """Raised when an enumeration would exceed a configured cap.

    ``required`` names the size the operation would have needed.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class VerificationError(CurveMedianError, RuntimeError):
    """Raised by the verification harness when an oracle check fails."""
