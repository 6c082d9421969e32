"""Exception types shared across the package."""


class PadlockError(Exception):
    """Base class for all padlock-system errors."""


class StructuralError(PadlockError, ValueError):
    """A circuit, distribution or system violates its structural invariants."""


class CapacityError(PadlockError):
    """An enumeration or search would exceed its configured limit."""


class BudgetExceeded(CapacityError):
    """An exhaustive search ran out of its node budget."""


class IntegrityError(PadlockError):
    """Secret shares disagree with each other."""


class SchemaError(PadlockError, ValueError):
    """Malformed JSON input. ``path`` names the offending location."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
