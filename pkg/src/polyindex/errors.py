"""Exception hierarchy shared across the package.

The CLI maps these onto distinct exit codes, so new error conditions
should reuse one of the classes below rather than raising bare
exceptions.
"""

from __future__ import annotations


class PolyindexError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(PolyindexError, ValueError):
    """A graph, permutation, or matrix violates a structural invariant."""


class ParseError(PolyindexError, ValueError):
    """Malformed textual input (graph files, line drawings, manifests)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SizeLimitError(PolyindexError, ValueError):
    """An input exceeds a configured or hard size bound."""


class DatabaseFormatError(ParseError):
    """A serialized database is corrupt, truncated, or of an unknown version."""
