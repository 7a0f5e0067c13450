"""Exception types shared across the package."""

from __future__ import annotations


class HBLError(Exception):
    """Base class for all package errors."""


class InvalidElement(HBLError, ValueError):
    """An element encoding does not belong to the model it was given to."""


class BudgetExceeded(HBLError, MemoryError):
    """A search would exceed the configured memory budget.

    ``estimated`` is the projected element count at the point of refusal.
    """

    def __init__(self, message: str, estimated: int | None = None):
        super().__init__(message)
        self.estimated = estimated


class SnapshotError(HBLError, ValueError):
    """A snapshot file is malformed, truncated, or belongs to another model."""


class NonGeodesicError(HBLError, ValueError):
    """A word that was required to be geodesic is not."""


class UndeterminedStatus(HBLError, ValueError):
    """A window query hit an element whose membership is undetermined."""


class InvariantViolation(HBLError, AssertionError):
    """An internal consistency check failed."""
