"""Uniform-bin histograms and bin-width selection.

The bin width is chosen by minimizing the mean/variance cost
``C = (2*kbar - v) / width**2`` over an explicit candidate grid, where
``kbar`` and ``v`` are the mean and biased variance of the per-bin counts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyDensityError, InvalidConfigError

DEFAULT_GRID_SIZE = 50


@dataclass
class Histogram:
    """Counts over uniform half-open bins [origin + i*w, origin + (i+1)*w)."""

    bin_width: float
    counts: np.ndarray
    origin: float = 0.0
    overflow: int = 0

    def __post_init__(self):
        self.counts = np.asarray(self.counts, dtype=np.int64)

    @property
    def n_bins(self) -> int:
        return int(self.counts.size)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class Density:
    """Probability mass per bin on a uniform grid."""

    bin_width: float
    values: np.ndarray
    origin: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)

    @property
    def n_bins(self) -> int:
        return int(self.values.size)


def bin_count(t_max: float, bin_width: float, origin: float) -> int:
    # Snap near-integer ratios so t_max = n * width gives exactly n bins.
    ratio = (t_max - origin) / bin_width
    n = int(np.floor(ratio + 1e-9))
    if ratio - n > 1e-9:
        n += 1
    return max(n, 1)


def build_histogram(
    samples, bin_width: float, t_max: float, origin: float = 0.0
) -> Histogram:
    """Bin samples on [origin, t_max); out-of-range samples count as overflow.

    A sample x lands in bin floor((x - origin) / bin_width); values exactly on
    a boundary go to the right bin.
    """
    if bin_width <= 0:
        raise InvalidConfigError(f"bin_width must be positive, got {bin_width}")
    if t_max <= origin:
        raise InvalidConfigError(f"t_max must exceed origin, got {t_max}")

    samples = np.asarray(samples, dtype=np.float64)
    n_bins = bin_count(t_max, bin_width, origin)
    idx = np.floor((samples - origin) / bin_width).astype(np.int64)
    in_range = (samples >= origin) & (samples < t_max) & (idx >= 0) & (idx < n_bins)
    counts = np.bincount(idx[in_range], minlength=n_bins)
    return Histogram(
        bin_width=bin_width,
        counts=counts,
        origin=origin,
        overflow=int(samples.size - in_range.sum()),
    )


def shimazaki_cost(hist: Histogram) -> float:
    """Cost (2*kbar - v) / width**2 with biased (1/N) variance of the counts."""
    counts = hist.counts.astype(np.float64)
    kbar = counts.mean()
    v = np.mean((kbar - counts) ** 2)
    return float((2.0 * kbar - v) / hist.bin_width**2)


def default_width_grid(samples, size: int = DEFAULT_GRID_SIZE) -> np.ndarray:
    """Log-spaced candidate widths between 1 s and max(samples)/20.

    For integer-valued samples (the native 1-second timestamp lattice) the
    candidates are rounded to whole seconds: a fractional width drifts across
    the lattice and imprints a sawtooth on the binned densities.
    """
    samples = np.asarray(samples, dtype=np.float64)
    upper = float(samples.max()) / 20.0
    if upper <= 1.0:
        return np.asarray([1.0])
    grid = np.geomspace(1.0, upper, size)
    if np.all(samples == np.floor(samples)):
        grid = np.unique(np.rint(grid))
    return grid


def optimal_bin_width(samples, candidates=None) -> float:
    """Candidate width minimizing the count-statistics cost; ties go small.

    Each candidate is evaluated on a grid that covers every sample, so no
    data is dropped during the search.
    """
    samples = np.asarray(samples, dtype=np.float64)
    if samples.size < 2:
        raise InvalidConfigError("bin-width selection needs at least 2 samples")
    if candidates is None:
        candidates = default_width_grid(samples)
    candidates = np.asarray(candidates, dtype=np.float64)
    if candidates.size == 0:
        raise InvalidConfigError("empty candidate grid")
    if np.any(candidates <= 0):
        raise InvalidConfigError("candidate widths must be positive")

    top = float(samples.max())
    best_width = None
    best_cost = np.inf
    for width in np.sort(candidates):
        t_max = (np.floor(top / width) + 1.0) * width
        cost = shimazaki_cost(build_histogram(samples, width, t_max))
        if cost < best_cost:
            best_cost = cost
            best_width = float(width)
    return best_width


def normalize(hist: Histogram) -> Density:
    """Convert counts to masses summing to 1 over the in-range bins."""
    total = hist.total
    if total < 1:
        raise EmptyDensityError("histogram holds no in-range samples")
    return Density(
        bin_width=hist.bin_width,
        values=hist.counts / float(total),
        origin=hist.origin,
    )


def bins_to_csv(bin_width: float, values, origin: float = 0.0) -> str:
    """Serialize per-bin values as ``bin_start,value`` rows."""
    lines = ["bin_start,value"]
    for i, v in enumerate(np.asarray(values)):
        lines.append(f"{origin + i * bin_width},{v}")
    return "\n".join(lines) + "\n"


def histogram_to_csv(hist: Histogram) -> str:
    return bins_to_csv(hist.bin_width, hist.counts, hist.origin)


def density_to_csv(density: Density) -> str:
    return bins_to_csv(density.bin_width, density.values, density.origin)
