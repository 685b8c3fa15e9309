"""Exception hierarchy shared by every module."""


class DeltaPrismError(Exception):
    """Base class for domain errors (mapped to exit code 3 by the CLI)."""


class RingMismatch(DeltaPrismError):
    pass


class NotDivisible(DeltaPrismError):
    pass


class PrecisionExhausted(DeltaPrismError):
    pass


class NotAUnit(DeltaPrismError):
    pass


class DepthExceeded(DeltaPrismError):
    pass


class MissingAssignment(DeltaPrismError):
    pass


class DegreeExceeded(DeltaPrismError):
    pass


class NotRegular(DeltaPrismError):
    pass


class DivisionNotExact(DeltaPrismError):
    """Raised when ghost inversion hits a non-integral quotient (a bug)."""


class LengthTooShort(DeltaPrismError):
    pass


class ParseError(ValueError):
    """Malformed input; ``position`` is the 0-based offset when there is one."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} at position {position}")
        self.position = position
