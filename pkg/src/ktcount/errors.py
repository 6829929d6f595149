"""Exception types shared across the package."""


class KtcError(Exception):
    """Base class for all package errors."""


class CapacityError(KtcError):
    """Raised when an input exceeds a configured runtime budget."""

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class Graph6Error(KtcError, ValueError):
    """Malformed graph6 input; ``offset`` is the offending byte position."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class TripleValidationError(KtcError, ValueError):
    """A triple violates the construction rules at a given step."""

    def __init__(self, constraint, step, detail=""):
        msg = f"constraint {constraint!r} violated at i={step}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.constraint = constraint
        self.step = step


class ConsistencyError(KtcError, ValueError):
    """Two inputs that must agree do not."""


class ReconstructionError(KtcError):
    """The graph cannot have been produced from the given prefix."""


class DomainError(KtcError, ValueError):
    """Formula evaluated outside its domain."""
