"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "ArgclError",
    "ParseError",
    "PreconditionError",
    "BudgetExceededError",
    "ConstructionError",
]


class ArgclError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(ArgclError):
    """Malformed input text.

    Attributes:
        line: 1-based line number of the offending input line, or None
            when the error is not tied to a specific line.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class PreconditionError(ArgclError):
    """An operation was invoked on inputs violating its stated precondition."""


class BudgetExceededError(ArgclError):
    """A computation would exceed the configured enumeration budget."""


class ConstructionError(ArgclError):
    """A gadget construction produced a formula that failed verification.

    This indicates an internal inconsistency: constructions verify their
    output extensionally and must never silently return a wrong formula.
    """
