"""Exception hierarchy.

Every validation failure carries the name of the offending field so the CLI
can report it verbatim.
"""

from __future__ import annotations


class CohsysError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(CohsysError, ValueError):
    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)


class CycleError(ValidationError):
    pass


class DisconnectedError(ValidationError):
    pass


class GenusError(ValidationError):
    pass


class GcdError(ValidationError):
    pass


class DegreeError(ValidationError):
    pass


class ShapeError(ValidationError):
    pass


class EmptySubcurveError(ValidationError):
    pass


class SingleComponentError(ValidationError):
    pass


class ZeroRankError(ValidationError):
    pass


class ZeroKError(ValidationError):
    pass


class HypothesisError(ValidationError):
    """A hypothesis required by the invoked result does not hold."""


class BoundsError(CohsysError):
    """The candidate box is empty or larger than the enumeration cap."""
