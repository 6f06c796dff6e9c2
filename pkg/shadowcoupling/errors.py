"""
Exception hierarchy for shadowcoupling.

Every error derives from ValueError so callers that already guard bad input
with ``except ValueError`` keep working. Order decisions and verification
reports never raise; they return results carrying a witness instead.
"""

from typing import Any, Optional


class ShadowCouplingError(ValueError):
    """Base class for all library errors."""


class DomainError(ShadowCouplingError):
    """An argument lies outside the range an operation is defined on."""


class OrderViolationError(ShadowCouplingError):
    """A stochastic-order precondition does not hold."""

    def __init__(self, message: str, witness: Optional[Any] = None):
        super().__init__(message)
        self.witness = witness


class ContractViolationError(ShadowCouplingError):
    """A caller-certified precondition (e.g. convexity) is false."""


class NotAPotentialError(ShadowCouplingError):
    """A piecewise-linear function is not the put potential of a measure."""


class InternalInconsistencyError(ShadowCouplingError):
    """A postcondition or cross-check failed; indicates a bug, not bad input."""


class RefusalError(ShadowCouplingError):
    """The instance exceeds a size guard."""


class MissingCostError(ShadowCouplingError):
    """A cost table has no entry for a support pair."""

    def __init__(self, x: Any, y: Any):
        super().__init__(f"cost table has no entry for ({x}, {y})")
        self.pair = (x, y)


class InputFormatError(ShadowCouplingError):
    """An instance or coupling file could not be parsed."""
