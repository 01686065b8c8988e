#!/usr/bin/env python3
"""Detection power and false-alarm sweep on synthetic periodic overlays.

Plants period-P trains (several phase-offset sources, ~5% of traffic) in a
sparse memoryless background and sweeps the per-event jitter. Prints the
detection rate per jitter level plus the false-alarm rate on clean
backgrounds, reproducing the numbers frozen in the acceptance suite.

The sweep shows the method's envelope: the comb in the density estimate
survives jitter up to about one bin width and disappears once the teeth
smear over many bins, because the per-bin excess of a 5% overlay is then
capped near 1% of the background level.

Usage: python scripts/detection_power_sweep.py [--seeds N] [--m M]
"""

from __future__ import annotations

import argparse

from renewalstream import (
    DetectionConfig,
    EstimationConfig,
    detect,
    gen_poisson,
    inject_periodic,
)
from renewalstream.estimation import empirical_only

MEAN_GAP = 240.0
MAX_ORDER = 150
PERIOD = 50 * MEAN_GAP
TRAINS = 3
SUB_BINS = 32
P_FA = 0.05


def build_stream(seed: int, m: int, jitter: float):
    base = gen_poisson(MEAN_GAP, m, seed)
    span = int(base.times[-1] - base.times[0])
    per_train = int(span // PERIOD)
    merged = base
    for i in range(TRAINS):
        merged, _ = inject_periodic(
            merged, PERIOD, jitter=jitter, count=per_train, seed=seed * 10 + i
        )
    return merged


def detected(stream) -> bool:
    estimate = empirical_only(
        stream, EstimationConfig(k=MAX_ORDER, bin_width=1.0)
    )
    n_sub = max(1, estimate.n_bins // SUB_BINS)
    report = detect(estimate, DetectionConfig(n_sub=n_sub, p_fa=P_FA))
    return report.detected


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=20)
    parser.add_argument("--m", type=int, default=100_000)
    args = parser.parse_args()

    print(
        f"background: mean gap {MEAN_GAP:.0f}s, m={args.m}; "
        f"overlay: {TRAINS} trains at P={PERIOD:.0f}s (~5.7% of traffic)"
    )
    for jitter in (0.0, 1.0, 2.0, 5.0, PERIOD / 100, PERIOD / 20):
        hits = sum(
            detected(build_stream(seed, args.m, jitter))
            for seed in range(1, args.seeds + 1)
        )
        print(f"jitter {jitter:7.1f}s: detected {hits}/{args.seeds}")

    false_alarms = sum(
        detected(gen_poisson(MEAN_GAP, args.m, seed))
        for seed in range(1000, 1000 + args.seeds)
    )
    print(f"false alarms on clean background: {false_alarms}/{args.seeds}")


if __name__ == "__main__":
    main()
