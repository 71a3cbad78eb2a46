#!/usr/bin/env python3
"""Measure diff latency distribution over the fixture corpus.

Prints per-pair block counts and the p50/p95/max of full diff_projects runs
(parse-to-report) so regressions against the half-second budget show up.
"""

import argparse
import statistics
import time

from stitch.corpus import build_pairs
from stitch.diff import diff_projects
from stitch.model import walk_project_blocks


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--runs", type=int, default=50)
    args = parser.parse_args()

    pairs = build_pairs()
    timings: list[float] = []
    for i in range(args.runs):
        pair, student, teacher = pairs[i % len(pairs)]
        start = time.perf_counter()
        diff_projects(student, teacher)
        timings.append((time.perf_counter() - start) * 1000)
    timings.sort()

    for pair, _, teacher in pairs:
        blocks = sum(1 for _ in walk_project_blocks(teacher))
        print(f"{pair.name:18s} {blocks:4d} blocks, {len(teacher.sprites)} sprites")
    print(
        f"\n{args.runs} runs: p50={statistics.median(timings):.1f} ms  "
        f"p95={timings[int(len(timings) * 0.95) - 1]:.1f} ms  max={timings[-1]:.1f} ms"
    )


if __name__ == "__main__":
    main()
