"""Exception types shared across the package."""


class RieszmodError(Exception):
    """Base class for every error raised by this package."""


class ShapeMismatchError(RieszmodError):
    """Operands carry incompatible block profiles or module shapes."""


class InvalidParameterError(RieszmodError):
    """A parameter lies outside its documented domain."""


class InvalidStateError(RieszmodError):
    """An operation was invoked on an object in the wrong state."""


class FredholmAlternativeError(InvalidStateError):
    """A unique solve was requested although the operator is not injective."""


class NumericalFailureError(RieszmodError):
    """A numerical routine failed or conditioning left the trusted range."""


class InvariantViolationError(RieszmodError):
    """An internal consistency check failed: a bug or a tolerance breakdown."""


class ProblemFormatError(RieszmodError):
    """A problem or report file violates the expected schema."""
