"""Exception hierarchy. The CLI maps each class to an exit code."""
from __future__ import annotations


class TamechromaError(Exception):
    """Base class for all library errors."""


class DomainError(TamechromaError, ValueError):
    """An argument lies outside the domain of the operation."""


class NoSignChange(DomainError):
    """A root bracket does not straddle a sign change."""


class ConvergenceError(TamechromaError, ArithmeticError):
    """An iterative solver stopped without meeting its tolerance."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (last residual {residual:.3e})")
        self.residual = residual


class CertificationError(TamechromaError):
    """An interval enclosure could not establish the required sign."""


class BudgetExceeded(TamechromaError):
    """A search ran out of its node or time budget.

    ``lower`` and ``upper`` carry the best bounds known when the search stopped.
    """

    def __init__(self, message: str, lower=None, upper=None):
        super().__init__(message)
        self.lower = lower
        self.upper = upper
