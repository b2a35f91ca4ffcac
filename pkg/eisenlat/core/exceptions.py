"""
eisenlat - Errors
Every error carries the process exit code the CLI maps it to.
"""

from typing import Any


class EisenlatError(Exception):
    """Base class for library errors."""

    exit_code = 1
    kind = "error"


class ValidationError(EisenlatError, ValueError):
    """Malformed input or a failed invariant check."""

    exit_code = 2
    kind = "validation"

    def __init__(self, message: str, offending: list[Any] | None = None):
        super().__init__(message)
        self.offending = list(offending or [])


class RankError(ValidationError):
    """Generators of the wrong rank, or ambients that do not match."""


class NotContainedError(ValidationError):
    """A lattice that was expected to lie inside another does not."""


class BudgetExceeded(EisenlatError):
    """A search ran out of time; `partial` holds what was found so far."""

    exit_code = 3
    kind = "budget"

    def __init__(self, message: str, elapsed: float = 0.0, partial: Any = None):
        super().__init__(message)
        self.elapsed = elapsed
        self.partial = partial


class Indeterminate(BudgetExceeded):
    """An isometry test that could not be decided within its budget."""

    kind = "indeterminate"


class UsageError(EisenlatError):
    """Bad command-line usage."""

    exit_code = 4
    kind = "usage"
