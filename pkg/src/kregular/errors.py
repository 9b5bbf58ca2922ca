"""Exception hierarchy shared by every module."""


class KRegularError(Exception):
    """Base class for all library errors."""


class DefinitionError(KRegularError):
    """Unknown builtin name, bad parameters, or a malformed definition document."""

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class UsageError(KRegularError, ValueError):
    """An argument is outside the documented domain of an operation."""


class UnderdeterminedSystem(KRegularError):
    """A dependency cycle has no seed and no default value."""

    def __init__(self, indices):
        self.indices = sorted(indices)
        super().__init__(f"unseeded indices: {self.indices}")


class InconsistentSystem(KRegularError):
    """The rules force a contradiction or a non-integer value."""


class NotWithinCaps(KRegularError):
    """A search exceeded its state, rank, or period cap."""


class HorizonExhausted(KRegularError):
    """The truncation windows became too short to compare kernel nodes."""


class HorizonTooSmall(KRegularError):
    """A guessed witness closed but failed verification at the extended horizon."""


class CorruptRepresentation(KRegularError):
    """A linear representation produced a non-integer value."""


class ProbeInapplicable(KRegularError):
    """The growth probe anchor value is too small to take logarithms."""
