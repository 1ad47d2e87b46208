"""Shared test helpers: hypothesis strategies and independent mini-oracles."""

from __future__ import annotations

import random

import hypothesis.strategies as st

from syncmdp import Cycle, Distribution, Mdp, letters, reachable, successor


@st.composite
def small_mdps(draw, max_states: int = 4, max_actions: int = 2):
    n = draw(st.integers(1, max_states))
    k = draw(st.integers(1, max_actions))

    def dist() -> Distribution:
        support = draw(
            st.lists(st.integers(0, n - 1), min_size=1, max_size=n, unique=True)
        )
        weights = draw(
            st.lists(st.integers(1, 8), min_size=len(support), max_size=len(support))
        )
        total = sum(weights)
        probs = [0.0] * n
        for i, w in zip(support, weights):
            probs[i] = w / total
        return Distribution(tuple(probs))

    rows = tuple(tuple(dist() for _ in range(k)) for _ in range(n))
    return Mdp(
        tuple(f"q{i}" for i in range(n)),
        tuple(f"a{j}" for j in range(k)),
        dist(),
        rows,
    )


def random_cycle(mdp: Mdp, mode: str, rng: random.Random) -> Cycle:
    """Random closed walk: wander from a random reachable cell until a repeat."""
    reach = reachable(mdp, mode)
    cells = [rng.choice(reach.cells)]
    lets = []
    seen = {cells[0]: 0}
    while True:
        options = list(letters(mdp, cells[-1], mode))
        letter = rng.choice(options)
        nxt = successor(mdp, cells[-1], letter)
        lets.append(letter)
        cells.append(nxt)
        if nxt in seen:
            i = seen[nxt]
            return Cycle(tuple(cells[i:]), tuple(lets[i:]))
        seen[nxt] = len(cells) - 1


def accessible_set(succ_masks: list[int], start: int) -> int:
    """States reachable from ``start`` in >= 1 steps, by plain closure."""
    frontier = succ_masks[start]
    seen = 0
    while frontier & ~seen:
        seen |= frontier
        nxt = 0
        m = frontier
        while m:
            low = m & -m
            nxt |= succ_masks[low.bit_length() - 1]
            m ^= low
        frontier = nxt
    return seen
