"""Event-stream ingestion: log parsing, inter-arrival extraction, downsampling.

Timestamps are integer seconds. Sub-second inputs are rejected rather than
truncated so that same-second events (zero inter-arrivals) stay an explicit,
visible feature of the data.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import datetime, timezone

import numpy as np

from .errors import (
    EmptyStreamError,
    InsufficientDataError,
    InvalidConfigError,
    ParseError,
)

_EPOCH_RE = re.compile(r"[+-]?\d+")
_ISO_RE = re.compile(r"\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}")


@dataclass
class EventStream:
    """Sorted absolute event times, in integer seconds.

    ``times`` is non-decreasing; duplicates mark same-second events.
    """

    times: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=np.int64)

    @property
    def m(self) -> int:
        return int(self.times.size)

    @property
    def span(self) -> int:
        """Seconds between the first and the last event."""
        return int(self.times[-1] - self.times[0]) if self.m >= 2 else 0

    @property
    def rate(self) -> float:
        """Average events per second, (m - 1) / span."""
        if self.m < 2:
            raise InsufficientDataError("rate needs at least 2 events")
        if self.span <= 0:
            raise InsufficientDataError("rate undefined for a zero-span stream")
        return (self.m - 1) / self.span


@dataclass
class InterArrivals:
    """Differences between consecutive event times; zeros are preserved."""

    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.int64)

    @property
    def n(self) -> int:
        return int(self.values.size)

    @property
    def total(self) -> int:
        return int(self.values.sum())

    @property
    def mean(self) -> float:
        if self.n == 0:
            raise InsufficientDataError("no inter-arrivals")
        return float(self.values.mean())

    @property
    def rate(self) -> float:
        """Events per second of the originating stream."""
        if self.total <= 0:
            raise InsufficientDataError("rate undefined: zero total span")
        return self.n / self.total


def _parse_line(line: str, line_no: int) -> int:
    if _EPOCH_RE.fullmatch(line):
        return int(line)
    if _ISO_RE.fullmatch(line):
        try:
            dt = datetime.strptime(line, "%Y-%m-%dT%H:%M:%S")
        except ValueError:
            raise ParseError(line_no, line, "invalid calendar date/time") from None
        return int(dt.replace(tzinfo=timezone.utc).timestamp())
    raise ParseError(
        line_no, line, "expected integer epoch seconds or YYYY-MM-DDTHH:MM:SS"
    )


def parse_stream(text: str) -> EventStream:
    """Parse a one-timestamp-per-line log into a sorted :class:`EventStream`.

    Accepted line forms: integer epoch seconds, or an ISO-8601 datetime with
    one-second resolution (interpreted as UTC). Lines starting with ``#`` and
    blank lines are skipped. Input order does not matter; duplicates are kept.
    """
    times = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        times.append(_parse_line(line, line_no))
    if not times:
        raise EmptyStreamError("no events in input")
    return EventStream(np.sort(np.asarray(times, dtype=np.int64), kind="stable"))


def serialize_stream(stream: EventStream) -> str:
    """Render a stream in the log format; inverse of :func:`parse_stream`."""
    return "".join(f"{t}\n" for t in stream.times)


def inter_arrivals(stream: EventStream) -> InterArrivals:
    """Consecutive time differences of a stream (length m - 1)."""
    if stream.m < 2:
        raise InsufficientDataError(
            f"need at least 2 events for inter-arrivals, got {stream.m}"
        )
    return InterArrivals(np.diff(stream.times))


def downsample(
    arrivals: InterArrivals, group_min: int, group_max: int, seed: int
) -> InterArrivals:
    """Replace runs of consecutive inter-arrivals by their sums.

    Each run length is drawn uniformly from [group_min, group_max]; a trailing
    partial run is emitted as its sum, so the total duration is preserved for
    every seed.
    """
    if group_min < 1:
        raise InvalidConfigError(f"group_min must be >= 1, got {group_min}")
    if group_max < group_min:
        raise InvalidConfigError(
            f"group_max must be >= group_min, got {group_min}..{group_max}"
        )
    if arrivals.n == 0:
        raise InsufficientDataError("cannot downsample an empty sequence")

    rng = np.random.default_rng(seed)
    values = arrivals.values
    out = []
    i = 0
    while i < values.size:
        g = int(rng.integers(group_min, group_max + 1))
        out.append(int(values[i : i + g].sum()))
        i += g
    return InterArrivals(np.asarray(out, dtype=np.int64))
