"""Shared exception hierarchy.

``DecdiagError`` covers every domain-level failure; ``ParseError`` marks input
format problems (the CLI maps them to exit code 2 vs. 1).
"""

from __future__ import annotations


class DecdiagError(Exception):
    """Base class for all domain errors raised by this package."""


class ParseError(DecdiagError):
    """An input document, path spec, or certificate payload is malformed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
