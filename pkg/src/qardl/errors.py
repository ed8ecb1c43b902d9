"""Exception hierarchy shared by every module."""

from __future__ import annotations


class QardlError(Exception):
    """Base class for all errors raised by this package."""


class DataError(QardlError, ValueError):
    """Malformed, missing or inconsistent input data.

    ``path`` and ``line`` carry file context when the problem was found
    while reading a file.
    """

    def __init__(self, message: str, path: str | None = None, line: int | None = None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(where + message)
        self.message = message


class ConfigError(QardlError, ValueError):
    """Invalid run configuration."""


class EstimationError(QardlError, RuntimeError):
    """A solver or estimator could not produce a result."""


class RankDeficiencyError(EstimationError):
    """Design matrix lacks full column rank.

    ``columns`` lists the labels of the columns found to be linearly
    dependent on the preceding ones.
    """

    def __init__(self, message: str, columns: list | None = None):
        self.columns = list(columns or [])
        super().__init__(message)


class ConvergenceError(EstimationError):
    """Iterative solver stopped before reaching its tolerance."""

    def __init__(self, message: str, gap: float | None = None):
        self.gap = gap
        super().__init__(message)
