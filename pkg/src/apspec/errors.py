"""Exception types shared across the package."""

from __future__ import annotations


class ApspecError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(ApspecError, ValueError):
    """An input point, matrix, or frequency has the wrong dimension."""


class EvaluationRangeError(ApspecError, OverflowError):
    """A complex evaluation would overflow double precision.

    Raised before exp() is attempted, so callers can shrink radii or
    imaginary shifts instead of propagating inf.
    """

    def __init__(self, message: str, exponent: float = 0.0):
        super().__init__(message)
        self.exponent = exponent


class BudgetExceededError(ApspecError, RuntimeError):
    """A quadrature grid would exceed the configured point budget."""


class PreconditionError(ApspecError, ValueError):
    """An operation was called outside its documented parameter range."""
