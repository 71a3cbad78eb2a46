#!/usr/bin/env python3
"""Write the seeded-bug fixture corpus and equivalence variants to disk."""

import argparse
import json

from stitch.corpus import write_corpus


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", nargs="?", default="corpus", help="output directory")
    args = parser.parse_args()
    summary = write_corpus(args.out)
    print(json.dumps(summary, indent=2))


if __name__ == "__main__":
    main()
