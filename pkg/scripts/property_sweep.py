#!/usr/bin/env python3
"""Run the behavioural property suites over the whole term corpus and print
a verdict table.

    python scripts/property_sweep.py [--depth N] [--size N]
"""

import argparse
import pathlib
import sys
import time

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))

from rccsnet.ccs import render
from rccsnet.cli import _check_term
from rccsnet.corpus import corpus


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--depth", type=int, default=5)
    ap.add_argument("--size", type=int, default=25)
    args = ap.parse_args()

    failures = 0
    for p in corpus(args.size):
        term = render(p)
        t0 = time.perf_counter()
        results = _check_term(term, args.depth)
        took = time.perf_counter() - t0
        bad = [name for name, ok, _ in results if not ok]
        status = "ok" if not bad else "FAIL " + ",".join(bad)
        print(f"{term:<45} {status:<8} ({took:.2f}s)")
        failures += len(bad)
    print(f"\n{failures} failing properties")
    return 0 if failures == 0 else 2


if __name__ == "__main__":
    sys.exit(main())
