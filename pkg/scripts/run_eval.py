#!/usr/bin/env python3
"""End-to-end evaluation: generate the corpus, run the batch, summarize.

Equivalent to `stitch make-corpus` + `stitch eval` but prints a compact table
with the headline numbers (detection rate, equivalence blindness, latency,
fixed-point convergence).
"""

import argparse
import statistics
import tempfile

from stitch.corpus import write_corpus
from stitch.session import run_batch


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dir", help="corpus directory (default: a temp dir)")
    args = parser.parse_args()

    corpus_dir = args.dir or tempfile.mkdtemp(prefix="stitch-corpus-")
    write_corpus(corpus_dir)

    pair_rows = run_batch(f"{corpus_dir}/pairs")
    variant_rows = run_batch(f"{corpus_dir}/variants")

    print(f"{'pair':28s} {'items':>5s} {'top?':>5s} {'ms':>7s} {'iters':>5s}")
    for row in pair_rows:
        print(
            f"{row['pair']:28s} {row.get('itemCount', '-'):>5} "
            f"{str(row.get('topMatchesSeeded', '-')):>5s} "
            f"{row.get('diffLatencyMs', float('nan')):>7.1f} "
            f"{row.get('iterationsToFixedPoint', '-'):>5}"
        )

    top = sum(bool(r.get("topMatchesSeeded")) for r in pair_rows)
    present = sum(bool(r.get("seededPresent")) for r in pair_rows)
    converged = sum(bool(r.get("reachedFixedPoint")) for r in pair_rows)
    blind = sum(bool(r.get("functionallyEquivalent")) for r in variant_rows)
    latencies = [r["diffLatencyMs"] for r in pair_rows if "diffLatencyMs" in r]
    print(
        f"\nseeded top-match {top}/10, present {present}/10, fixed point {converged}/10, "
        f"equivalence-blind {blind}/10, latency p95 "
        f"{sorted(latencies)[int(len(latencies) * 0.95) - 1]:.1f} ms"
    )


if __name__ == "__main__":
    main()
