"""Sweep the rotate-or-merge automata: reset words and witness shapes.

For each n, generate the n-state automaton, decide the blind strong problem,
and search the shortest reset word; the word length follows (n-1)^2.

Usage: python3 scripts/cerny_sweep.py [--max-n 10]
"""

from __future__ import annotations

import argparse
import time

from syncmdp import BLIND, decide, extract_sync_word, gen_cerny, shortest_sync_word


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-n", type=int, default=10)
    args = parser.parse_args()

    print(f"{'n':>3} {'verdict':>8} {'m':>4} {'d':>4} {'witness word':>12} "
          f"{'shortest':>8} {'(n-1)^2':>8} {'time':>7}")
    for n in range(2, args.max_n + 1):
        t0 = time.perf_counter()
        mdp = gen_cerny(n)
        verdict = decide(mdp, BLIND, "strong")
        word = shortest_sync_word(mdp)
        elapsed = time.perf_counter() - t0
        witness_word = extract_sync_word(mdp, verdict.witness)
        print(
            f"{n:>3} {verdict.answer:>8} {len(verdict.witness.access_letters):>4} "
            f"{verdict.witness.cycle.length:>4} {len(witness_word):>12} "
            f"{len(word) if word is not None else '-':>8} {(n - 1) ** 2:>8} "
            f"{elapsed:>6.2f}s"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
