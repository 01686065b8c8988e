#!/usr/bin/env python3
"""Calibrate the correlation-zone thresholds on the synthetic suite.

Runs the paired-estimate pipeline on seeded iid, mildly clustered and
strongly clustered streams at a fixed max order, prints the score
distribution per class, and suggests low/high thresholds at the geometric
midpoints between classes. The shipped defaults in
renewalstream.characterization were frozen from this script's output.

Usage: python scripts/calibrate_zone_thresholds.py [--seeds N] [--m M]
"""

from __future__ import annotations

import argparse

import numpy as np

from renewalstream import (
    EstimationConfig,
    characterize,
    difference,
    estimate_stream,
    gen_cluster,
    gen_poisson,
)

MAX_ORDER = 100

CLASSES = {
    # name: stream factory with matched ~0.25 events/s rate
    "iid": lambda seed, m: gen_poisson(4.0, m, seed),
    "mild_cluster": lambda seed, m: gen_cluster(
        6.0, 3.0, 1.0, m, seed, idle_run=3.0
    ),
    "strong_cluster": lambda seed, m: gen_cluster(
        13.0, 8.0, 0.5, m, seed, idle_run=4.0
    ),
}


def score_stream(stream) -> float:
    emp, conv = estimate_stream(stream, EstimationConfig(k=MAX_ORDER))
    curves = difference(emp, conv)
    return characterize(curves, emp.k, stream.rate).e_max_norm


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seeds", type=int, default=20)
    parser.add_argument("--m", type=int, default=100_000)
    args = parser.parse_args()

    results: dict[str, np.ndarray] = {}
    for name, factory in CLASSES.items():
        scores = np.asarray(
            [score_stream(factory(seed, args.m)) for seed in range(1, args.seeds + 1)]
        )
        results[name] = scores
        print(
            f"{name:>15}: min={scores.min():.3e} mean={scores.mean():.3e} "
            f"max={scores.max():.3e}"
        )

    iid_top = results["iid"].max()
    mild_bottom = results["mild_cluster"].min()
    mild_top = results["mild_cluster"].max()
    strong_bottom = results["strong_cluster"].min()
    low = float(np.sqrt(max(iid_top, 1e-12) * mild_bottom))
    high = float(np.sqrt(mild_top * strong_bottom))
    print(f"\nsuggested thresholds (k={MAX_ORDER}): low={low:.3e} high={high:.3e}")


if __name__ == "__main__":
    main()
