"""Exception types shared across the package.

The CLI maps these onto exit codes: expression errors exit 1, domain errors
(violated mathematical preconditions) exit 2, failed checks exit 3.
"""

from __future__ import annotations


class ExprError(ValueError):
    """Malformed input expression; carries the 0-based offset of the problem."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class DomainError(ValueError):
    """A mathematical precondition does not hold for the requested operation."""


class CriticalValueError(DomainError):
    """The density-weight shift lies in the critical set of some degree.

    ``pairs`` lists the witnessing (k, l) eigenvalue collisions, ``value`` the
    critical set member equal to the offending shift.
    """

    def __init__(self, message: str, value, pairs):
        super().__init__(message)
        self.value = value
        self.pairs = tuple(pairs)
