"""Exception hierarchy shared by the library and the command line tool."""

from __future__ import annotations


class CrossLayerError(Exception):
    """Base class for all errors raised by this package."""


class ModelError(CrossLayerError, ValueError):
    """Invalid topology, path, or routing.

    Attributes:
        code: Stable machine-readable error code (e.g. ``"unknown-node"``).
        token: Offending token, when one can be identified.
    """

    def __init__(self, code: str, message: str, token: str | None = None):
        super().__init__(message)
        self.code = code
        self.token = token


class ScenarioError(ModelError):
    """A scenario file failed to parse or validate.

    ``line`` and ``column`` are 1-based and point at the offending token.
    """

    def __init__(
        self,
        code: str,
        message: str,
        line: int | None = None,
        column: int | None = None,
        token: str | None = None,
    ):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(code, where + message, token)
        self.line = line
        self.column = column


class EnumerationLimitError(CrossLayerError):
    """An exhaustive enumeration would exceed its configured budget."""


class InfeasibleError(CrossLayerError):
    """No physical path exists for a required logical link."""
