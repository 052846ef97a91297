"""Exception types shared across the package."""


class PrimbaseError(Exception):
    """Base class for package-specific errors."""


class ConstructionError(PrimbaseError):
    """A group constructor failed validation (wrong order, bad parameters)."""


class BudgetExceeded(PrimbaseError):
    """A computation hit its configured resource budget before finishing."""

    def __init__(self, message, lower=None, upper=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
