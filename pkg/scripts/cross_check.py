"""Cross-check the exact decision procedure against the bounded oracle.

Runs all four decision problems on a seeded random corpus, compares against
bounded_cycle_search, and prints a per-problem agreement table plus the
yes-rate of each problem.

Usage: python3 scripts/cross_check.py [--count 200] [--max-states 4] [--bound 12]
"""

from __future__ import annotations

import argparse
import time

from syncmdp import BLIND, PERFECT, bounded_cycle_search, decide, gen_random

PROBLEMS = [(m, o) for m in (BLIND, PERFECT) for o in ("strong", "weak")]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=200)
    parser.add_argument("--max-states", type=int, default=4)
    parser.add_argument("--bound", type=int, default=12)
    args = parser.parse_args()

    t0 = time.perf_counter()
    yes = {p: 0 for p in PROBLEMS}
    bounded_yes = {p: 0 for p in PROBLEMS}
    disagreements = []
    for seed in range(args.count):
        n = 2 + seed % (args.max_states - 1)
        mdp = gen_random(n, 2, 1 + seed % 2, seed)
        for mode, obj in PROBLEMS:
            d = decide(mdp, mode, obj)
            b = bounded_cycle_search(mdp, mode, obj, args.bound)
            if d.answer == "yes":
                yes[(mode, obj)] += 1
            if b.answer == "yes":
                bounded_yes[(mode, obj)] += 1
            if (b.answer == "yes") != (d.answer == "yes") and d.answer == "no":
                disagreements.append((seed, mode, obj))

    elapsed = time.perf_counter() - t0
    print(f"{args.count} MDPs, bound {args.bound}, {elapsed:.1f}s")
    print(f"{'problem':24} {'decide yes':>10} {'bounded yes':>11}")
    for mode, obj in PROBLEMS:
        print(f"{mode + ' ' + obj:24} {yes[(mode, obj)]:>10} {bounded_yes[(mode, obj)]:>11}")
    if disagreements:
        print("DISAGREEMENTS:", disagreements)
        return 1
    print("no disagreements (bounded yes always implied decide yes)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
