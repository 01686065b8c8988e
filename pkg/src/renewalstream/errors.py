"""Exception hierarchy shared across the library.

Every error raised on a documented failure path derives from
:class:`StreamAnalysisError`, so callers (and the CLI) can catch one type.
"""


class StreamAnalysisError(Exception):
    """Base class for all library errors."""


class ParseError(StreamAnalysisError):
    """A log line could not be interpreted as a timestamp."""

    def __init__(self, line_no: int, line: str, reason: str):
        self.line_no = line_no
        self.line = line
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}: {line!r}")


class EmptyStreamError(StreamAnalysisError):
    """The input contained no events."""


class InsufficientDataError(StreamAnalysisError):
    """Not enough events or realizations for the requested operation."""


class InvalidConfigError(StreamAnalysisError):
    """A parameter is outside its documented domain."""


class EmptyDensityError(StreamAnalysisError):
    """A histogram with no in-range mass cannot be normalized."""


class GridMismatchError(StreamAnalysisError):
    """Two binned quantities use different bin widths."""


class DegenerateBinError(StreamAnalysisError):
    """A chi-square bin has zero expected value but nonzero observed value."""


class InsufficientOverlapError(StreamAnalysisError):
    """Two estimates share no common grid region."""
