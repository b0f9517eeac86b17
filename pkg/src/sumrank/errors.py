"""Exception types shared across the package."""

from __future__ import annotations


class SumRankError(Exception):
    """Base class for all package errors."""


class DivisionByZero(SumRankError, ZeroDivisionError):
    """Multiplicative inverse of zero requested."""


class ContextMismatch(SumRankError):
    """Operands belong to different field contexts."""


class DimensionError(SumRankError):
    """Matrix or vector dimensions are inconsistent."""


class PartitionError(SumRankError):
    """Length partitions disagree or do not match the data."""


class PreconditionError(SumRankError):
    """An operation was called outside its stated domain."""


class BudgetExceeded(SumRankError):
    """A search or enumeration exceeded its work budget."""


class InvariantViolation(SumRankError):
    """A structural invariant that should hold by construction failed."""


class DecodingFailure(SumRankError):
    """Received word is detected as uncorrectable (weight >= 2 error)."""


class LocalRepairImpossible(SumRankError):
    """Too many erasures inside one local group for local repair."""
