"""Exception hierarchy shared by every module of the package."""


class SchurIndexError(Exception):
    """Base class for all errors raised by :mod:`schurindex`."""


class DomainError(SchurIndexError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class MembershipError(DomainError):
    """An element is not in the group it is supposed to belong to."""


class ContainmentError(DomainError):
    """A subgroup (or subfield) inclusion required by an operation fails."""


class ShapeError(DomainError):
    """Malformed tables or vectors (wrong length, wrong index ranges)."""


class BoundExceededError(SchurIndexError):
    """A bounded search ran out of candidates."""


class OracleRefusal(SchurIndexError):
    """The brute-force oracle declined an instance whose data space is too large."""

    def __init__(self, message, cardinality=None):
        super().__init__(message)
        self.cardinality = cardinality


class InvariantViolation(SchurIndexError, AssertionError):
    """An internal invariant failed. Always a defect, never a user error."""
