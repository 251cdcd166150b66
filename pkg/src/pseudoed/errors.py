"""Exception hierarchy shared by the library and the CLI."""

from __future__ import annotations


class PseudoEdError(Exception):
    """Base class for every error raised deliberately by this package."""


class InvalidInput(PseudoEdError, ValueError):
    """Malformed strings, parameters, files or scripts (CLI exit code 2)."""


class ScriptError(InvalidInput):
    """An edit script cannot be applied to its source string."""

    def __init__(self, index: int, op: object, reason: str) -> None:
        super().__init__(f"op #{index} {op!r}: {reason}")
        self.index = index
        self.op = op
        self.reason = reason


class AlignmentError(InvalidInput):
    """An alignment violates the precondition of the routine consuming it."""


class ProfileMismatch(InvalidInput):
    """A source profile was used with a string it was not built from."""


class GuardRefusal(PseudoEdError):
    """A quadratic routine refused to run above its size guard (exit code 3)."""
