"""Exception types shared across the package.

The CLI maps these onto exit codes: usage errors exit 1, data and parse
errors exit 2, operating-system I/O failures exit 3.
"""

from __future__ import annotations


class QuerynetError(Exception):
    """Base class for all errors raised by this package."""


class DataError(QuerynetError):
    """Invalid input data: blank queries, empty corpora, duplicate pairs."""


class LoadError(DataError):
    """A lexical database directory is missing files or is inconsistent."""


class ParseError(DataError):
    """A malformed line in a database file or cache file."""

    def __init__(self, path: str, line_no: int, reason: str):
        self.path = path
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"{path}:{line_no}: {reason}")


class StaleCacheError(DataError):
    """A score cache does not match the current queries or parameters."""
