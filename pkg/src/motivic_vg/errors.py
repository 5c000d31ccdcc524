"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class MotivicError(Exception):
    """Base class for every error raised by this package."""


class NotAUnitError(MotivicError, ZeroDivisionError):
    """Division by an element that is not invertible in the coefficient ring."""


class SpecializationError(MotivicError, ValueError):
    """Bad specialization request (q <= 1 or an unassigned class symbol)."""


class DimensionError(MotivicError, ValueError):
    pass


class DomainError(MotivicError, ValueError):
    """A point or map falls outside the domain it was supplied for."""


class CapabilityError(MotivicError):
    """Input is outside what the decision procedures support."""


class ValidationError(MotivicError):
    """An internal self-check failed; ``point`` holds a counterexample."""

    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point


class NotIntegrableError(MotivicError, ValueError):
    """Raised by integration routines; ``violations`` lists (piece, a, b)."""

    def __init__(self, message: str, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class DSLError(MotivicError, ValueError):
    """Lexical, syntactic or type error in the formula language."""

    def __init__(self, message: str, span=None, expected=()):
        self.span = span
        self.expected = tuple(expected)
        where = f" at {span[0]}:{span[1]}" if span else ""
        if expected:
            message = f"{message} (expected one of: {', '.join(expected)})"
        super().__init__(message + where)
