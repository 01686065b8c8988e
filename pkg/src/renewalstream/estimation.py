"""Renewal-density estimation.

Two estimators of the arrival intensity at lag t are provided:

* the empirical estimate, built by histogramming sliding-window partial sums
  of each order up to k and summing the per-order densities, and
* the convolution estimate, built by repeatedly convolving the first-order
  inter-arrival density with itself, which by construction sees only
  first-order (memoryless) structure.

Both are expressed as per-second densities so a memoryless stream with mean
gap g reads flat at 1/g, and both use one shared bin width so their
difference is bin-aligned.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .errors import GridMismatchError, InsufficientDataError, InvalidConfigError
from .histogram import (
    Density,
    bin_count,
    build_histogram,
    normalize,
    optimal_bin_width,
)
from .ingest import EventStream, InterArrivals, inter_arrivals

DEFAULT_MAX_ORDER = 1000
DEFAULT_ORDER_FRACTION = 10
DEFAULT_GRID_QUANTILE = 0.01
DEFAULT_CONV_SPAN_FACTOR = 1.5

# Above this output length, direct convolution is replaced by FFT.
_DIRECT_CONV_LIMIT = 4096


class PartialSumTable:
    """Sliding-window partial sums of orders 1..k.

    For n inter-arrivals and maximum order k < n there are n - k windows;
    window i contributes one realization of each order j, namely
    values[i] + ... + values[i + j - 1]. Realizations are derived on demand
    from a prefix-sum array, so large tables stay cheap.
    """

    def __init__(self, values: np.ndarray, k: int, source_rate: float | None):
        self.k = int(k)
        self.n_windows = int(values.size - k)
        self.source_rate = source_rate
        self._prefix = np.concatenate(
            [[0.0], np.cumsum(values, dtype=np.float64)]
        )

    def order(self, j: int) -> np.ndarray:
        """All realizations of the order-j partial sum, one per window."""
        if not 1 <= j <= self.k:
            raise InvalidConfigError(f"order must be in 1..{self.k}, got {j}")
        w = self.n_windows
        return self._prefix[j : j + w] - self._prefix[:w]


def partial_sums(arrivals: InterArrivals, k: int) -> PartialSumTable:
    """Build the order-1..k partial-sum table over all n - k windows."""
    if k < 1:
        raise InvalidConfigError(f"max order must be >= 1, got {k}")
    n = arrivals.n
    if k >= n:
        raise InsufficientDataError(
            f"max order {k} leaves no windows for {n} inter-arrivals"
        )
    rate = None
    if arrivals.total > 0:
        rate = arrivals.rate
    return PartialSumTable(arrivals.values, k, rate)


@dataclass
class RenewalDensityEstimate:
    """Binned per-second arrival density on [0, n_bins * bin_width)."""

    bin_width: float
    values: np.ndarray
    k: int
    kind: str  # "empirical" or "convolution"
    source_rate: float | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)

    @property
    def n_bins(self) -> int:
        return int(self.values.size)

    @property
    def t_max(self) -> float:
        return self.n_bins * self.bin_width

    def to_csv(self) -> str:
        lines = ["t,value"]
        for i, v in enumerate(self.values):
            lines.append(f"{i * self.bin_width},{v}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        return json.dumps(
            {
                "kind": self.kind,
                "delta": self.bin_width,
                "k": self.k,
                "rate": self.source_rate,
                "values": self.values.tolist(),
            }
        )


def empirical_rd(
    table: PartialSumTable, bin_width: float, t_max: float
) -> RenewalDensityEstimate:
    """Sum the per-order partial-sum densities on a common grid.

    Each order's histogram is normalized by the window count (not by its
    in-range mass): an order whose sums lie mostly beyond t_max then
    contributes only its true in-range tail instead of being inflated to
    full unit mass, which would distort the top of the grid.
    """
    if bin_width <= 0 or t_max <= 0:
        raise InvalidConfigError("bin_width and t_max must be positive")
    if table.n_windows < 1:
        raise InsufficientDataError("partial-sum table holds no windows")

    n_bins = bin_count(t_max, bin_width, origin=0.0)
    grid_end = n_bins * bin_width

    mass = np.zeros(n_bins, dtype=np.float64)
    for j in range(1, table.k + 1):
        sums = table.order(j)
        idx = np.floor(sums / bin_width).astype(np.int64)
        in_range = (sums < grid_end) & (idx >= 0) & (idx < n_bins)
        mass += np.bincount(idx[in_range], minlength=n_bins) / table.n_windows
    return RenewalDensityEstimate(
        bin_width=bin_width,
        values=mass / bin_width,
        k=table.k,
        kind="empirical",
        source_rate=table.source_rate,
    )


def first_order_pdf(
    arrivals: InterArrivals, bin_width: float, t_max: float
) -> Density:
    """Normalized histogram of the raw inter-arrival values."""
    hist = build_histogram(arrivals.values, bin_width, t_max)
    return normalize(hist)


def convolve(d1: Density, d2: Density) -> Density:
    """Full discrete linear convolution of two mass sequences."""
    if d1.bin_width != d2.bin_width:
        raise GridMismatchError(
            f"bin widths differ: {d1.bin_width} vs {d2.bin_width}"
        )
    return Density(
        bin_width=d1.bin_width,
        values=np.convolve(d1.values, d2.values),
        origin=d1.origin,
    )


def _convolve_truncated(acc: np.ndarray, f1: np.ndarray, n_bins: int) -> np.ndarray:
    if n_bins <= _DIRECT_CONV_LIMIT:
        out = np.convolve(acc, f1)[:n_bins]
    else:
        out = fftconvolve(acc, f1)[:n_bins]
        np.maximum(out, 0.0, out=out)
    if out.size < n_bins:
        out = np.pad(out, (0, n_bins - out.size))
    return out


def convolution_rd(
    f1: Density, k: int, source_rate: float | None = None
) -> RenewalDensityEstimate:
    """Sum of the 1..k fold self-convolutions of the first-order density.

    Every term is truncated to the grid of f1. Truncation is exact for the
    in-grid bins: a partial sum below t_max can only be built from gaps below
    t_max, so dropping out-of-grid mass never changes in-grid values.
    """
    if k < 1:
        raise InvalidConfigError(f"max order must be >= 1, got {k}")
    if f1.n_bins == 0:
        raise InsufficientDataError("first-order density is empty")

    n_bins = f1.n_bins
    term = f1.values.copy()
    total = term.copy()
    for _ in range(2, k + 1):
        term = _convolve_truncated(term, f1.values, n_bins)
        total += term
    return RenewalDensityEstimate(
        bin_width=f1.bin_width,
        values=total / f1.bin_width,
        k=k,
        kind="convolution",
        source_rate=source_rate,
    )


@dataclass
class EstimationConfig:
    """Knobs for the paired-estimate pipeline; None means auto."""

    k: int | None = None
    bin_width: float | None = None
    grid_quantile: float = DEFAULT_GRID_QUANTILE
    conv_span_factor: float = DEFAULT_CONV_SPAN_FACTOR


def default_max_order(n_arrivals: int) -> int:
    """min(1000, n/10), clamped so at least one window remains."""
    k = min(DEFAULT_MAX_ORDER, n_arrivals // DEFAULT_ORDER_FRACTION)
    return max(1, min(k, n_arrivals - 1))


def empirical_grid_end(
    table: PartialSumTable, bin_width: float, quantile: float = DEFAULT_GRID_QUANTILE
) -> float:
    """Grid end for the empirical estimate: a low quantile of the top order.

    Beyond the lower tail of the order-k sums the truncated estimator rolls
    off (orders above k are missing), so the grid stops where coverage by
    the first k orders is still essentially complete.
    """
    top = table.order(table.k)
    end = float(np.quantile(top, quantile))
    n_bins = max(1, int(np.floor(end / bin_width)))
    return n_bins * bin_width


def convolution_grid_end(
    arrivals: InterArrivals,
    k: int,
    bin_width: float,
    factor: float = DEFAULT_CONV_SPAN_FACTOR,
) -> float:
    """Grid end for the convolution estimate: factor * k * mean gap."""
    end = max(factor * k * arrivals.mean, float(arrivals.values.max()) + bin_width)
    return max(1, int(np.ceil(end / bin_width))) * bin_width


def estimate_stream(
    stream: EventStream, config: EstimationConfig | None = None
) -> tuple[RenewalDensityEstimate, RenewalDensityEstimate]:
    """Run both estimators on a stream with one shared bin width.

    Returns (empirical, convolution). The shared width comes from the
    first-order inter-arrivals unless overridden in the config.
    """
    config = config or EstimationConfig()
    arrivals = inter_arrivals(stream)
    if arrivals.total <= 0:
        raise InsufficientDataError("stream spans zero seconds")

    k = config.k if config.k is not None else default_max_order(arrivals.n)
    if k >= arrivals.n:
        raise InsufficientDataError(
            f"max order {k} needs more than {arrivals.n} inter-arrivals"
        )
    width = (
        config.bin_width
        if config.bin_width is not None
        else optimal_bin_width(arrivals.values)
    )

    table = partial_sums(arrivals, k)
    emp = empirical_rd(
        table, width, empirical_grid_end(table, width, config.grid_quantile)
    )
    f1 = first_order_pdf(
        arrivals,
        width,
        convolution_grid_end(arrivals, k, width, config.conv_span_factor),
    )
    conv = convolution_rd(f1, k, source_rate=arrivals.rate)
    return emp, conv


def empirical_only(
    stream: EventStream, config: EstimationConfig | None = None
) -> RenewalDensityEstimate:
    """Empirical estimate alone (the detection path does not need both)."""
    config = config or EstimationConfig()
    arrivals = inter_arrivals(stream)
    if arrivals.total <= 0:
        raise InsufficientDataError("stream spans zero seconds")
    k = config.k if config.k is not None else default_max_order(arrivals.n)
    if k >= arrivals.n:
        raise InsufficientDataError(
            f"max order {k} needs more than {arrivals.n} inter-arrivals"
        )
    width = (
        config.bin_width
        if config.bin_width is not None
        else optimal_bin_width(arrivals.values)
    )
    table = partial_sums(arrivals, k)
    return empirical_rd(
        table, width, empirical_grid_end(table, width, config.grid_quantile)
    )
