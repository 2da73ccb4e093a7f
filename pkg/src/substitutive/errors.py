"""Exception types raised across the package."""

from __future__ import annotations


class SubstitutiveError(Exception):
    """Base class for all errors raised by this package."""


class InvalidSymbol(SubstitutiveError, ValueError):
    pass


class EmptyWord(SubstitutiveError, ValueError):
    pass


class ParseError(SubstitutiveError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NoSeed(SubstitutiveError, ValueError):
    pass


class NotPrimitive(SubstitutiveError, ValueError):
    pass


class WindowExhausted(SubstitutiveError):
    """The materialized prefix is too short to decide the question.

    ``needed`` is the window length that would be required, when known.
    ``frontier`` optionally carries the offending search nodes.
    """

    def __init__(self, message: str, needed: int | None = None, frontier=None):
        self.needed = needed
        self.frontier = frontier
        super().__init__(message)


class NoBarInside(SubstitutiveError, ValueError):
    pass


class NotFitted(SubstitutiveError, ValueError):
    pass


class AmbiguousDesubstitution(SubstitutiveError):
    """Two fitted occurrences of one word desubstitute differently."""

    def __init__(self, message: str, first, second):
        self.first = first
        self.second = second
        super().__init__(message)


class NoRadius(SubstitutiveError, ValueError):
    pass


class NotInLanguage(SubstitutiveError, ValueError):
    pass


class PeriodicWord(SubstitutiveError, ValueError):
    """Power exponents keep growing with the window: the word looks periodic."""
