"""Exception hierarchy shared by every alglab module."""

from __future__ import annotations


class AlglabError(Exception):
    """Base class for all errors raised by alglab."""


class UsageError(AlglabError, ValueError):
    """An operation was called with arguments of the wrong shape or kind."""


class PreconditionError(AlglabError, ValueError):
    """A documented precondition of an operation does not hold."""


class InvalidStructureError(AlglabError, ValueError):
    """Construction data violates a defining invariant.

    ``violations`` holds the individual findings of the validation pass.
    """

    def __init__(self, message: str, violations: list | tuple = ()):
        super().__init__(message)
        self.violations = list(violations)


class ConsistencyError(AlglabError, RuntimeError):
    """Two independent computations of the same quantity disagree."""
