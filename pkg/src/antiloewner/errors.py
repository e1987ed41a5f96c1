"""Exception hierarchy.

Everything raised deliberately by this package derives from
:class:`AntiLoewnerError`, so callers (and the CLI, which maps these to exit
code 2) can catch one type.
"""

from __future__ import annotations


class AntiLoewnerError(Exception):
    """Base class for all errors raised by this package."""


class InputError(AntiLoewnerError):
    """Invalid input value: wrong shape, non-finite entry, bad weight."""


class SchemaError(InputError):
    """A structured document failed validation; carries the field path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


class DomainError(AntiLoewnerError):
    """A function was evaluated outside its domain."""


class ConstructionError(AntiLoewnerError):
    """A matrix family could not be built from the given ingredients."""


class NumericalError(AntiLoewnerError):
    """An internal numerical routine failed to converge."""
