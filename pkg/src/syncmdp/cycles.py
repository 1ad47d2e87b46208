"""Cycles of the subset constructions and their recurrent cyclic families.

A cycle is a closed walk of cells and letters. A recurrent cyclic set for a
cycle is a sequence of nonempty subsets, one per position, that steps exactly
onto the next subset under the position's letter and returns to its start.
``delta`` computes the family of all minimal such sets (minimal under
componentwise inclusion); ``delta_bruteforce`` recomputes it by plain
enumeration and is the oracle the fast path is validated against.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

from .bitset import bits, is_subset, subsets
from .model import Mdp
from .subset import Letter, successor

STRONG = "strong"
WEAK = "weak"
OBJECTIVES = (STRONG, WEAK)

Family = frozenset  # of tuples of cell masks, one component per cycle position


@dataclass(frozen=True)
class Relation:
    """Boolean successor relation with a designated domain cell.

    ``rows[i]`` is the target bitset of the i-th member of ``domain`` in
    ascending state order. Every row is nonempty because supports are.
    """

    domain: int
    rows: tuple[int, ...]

    @cached_property
    def _pos(self) -> dict[int, int]:
        return {s: i for i, s in enumerate(bits(self.domain))}

    def row(self, state: int) -> int:
        try:
            return self.rows[self._pos[state]]
        except KeyError:
            raise ValueError(f"state index {state} outside relation domain") from None

    def image(self, subset: int) -> int:
        """Union of rows over a subset of the domain."""
        if subset & ~self.domain:
            raise ValueError("subset escapes relation domain")
        out = 0
        for s in bits(subset):
            out |= self.rows[self._pos[s]]
        return out


@dataclass(frozen=True)
class Cycle:
    """Closed walk: cells[0] == cells[-1], one letter per step."""

    cells: tuple[int, ...]
    letters: tuple[Letter, ...]

    @property
    def length(self) -> int:
        return len(self.letters)

    def check(self, mdp: Mdp) -> None:
        """Raise unless every edge steps correctly and the walk closes."""
        if self.length < 1:
            raise ValueError("cycle must have length >= 1")
        if len(self.cells) != self.length + 1:
            raise ValueError("cycle needs one more cell than letters")
        if self.cells[0] != self.cells[-1]:
            raise ValueError("cycle does not close")
        for j, letter in enumerate(self.letters):
            got = successor(mdp, self.cells[j], letter)
            if got != self.cells[j + 1]:
                raise ValueError(f"edge {j} steps to wrong cell")


def step_relation(mdp: Mdp, cell: int, letter: Letter) -> Relation:
    """Per-state successor relation of one letter at one cell."""
    if not letter.covers(cell):
        raise ValueError("letter does not cover the cell")
    return Relation(cell, tuple(mdp.post_masks[s][letter.act(s)] for s in bits(cell)))


def _step_relations(mdp: Mdp, cycle: Cycle) -> list[Relation]:
    return [
        step_relation(mdp, cell, letter)
        for cell, letter in zip(cycle.cells[:-1], cycle.letters)
    ]


def round_trip(mdp: Mdp, cycle: Cycle) -> Relation:
    """Composition of the cycle's step relations, domain = starting cell."""
    steps = _step_relations(mdp, cycle)
    rows = []
    for s in bits(cycle.cells[0]):
        cur = 1 << s
        for st in steps:
            cur = st.image(cur)
        rows.append(cur)
    return Relation(cycle.cells[0], tuple(rows))


def minimal_fixed_sets(domain: int, image: Callable[[int], int]) -> list[int]:
    """Minimal nonempty fixed sets of a monotone union-additive image map.

    For each member, iterate the singleton's orbit until it repeats and take
    the union over the eventual period; that union is a fixed set, and because
    the map distributes over unions every minimal fixed set arises this way
    from any of its own members. Filtering to inclusion-minimal elements
    therefore yields exactly the minimal nonempty fixed sets.
    """
    unions: set[int] = set()
    for s in bits(domain):
        seen: dict[int, int] = {}
        seq: list[int] = []
        cur = 1 << s
        while cur not in seen:
            seen[cur] = len(seq)
            seq.append(cur)
            cur = image(cur)
        u = 0
        for x in seq[seen[cur]:]:
            u |= x
        unions.add(u)
    return sorted(
        u for u in unions if not any(v != u and is_subset(v, u) for v in unions)
    )


def delta(mdp: Mdp, cycle: Cycle) -> Family:
    """Family of minimal recurrent cyclic sets of ``cycle`` (orbit-union path).

    Each member is the componentwise image sequence of one minimal fixed set
    of the round-trip relation, truncated to one entry per cycle position.
    """
    steps = _step_relations(mdp, cycle)
    trip = round_trip(mdp, cycle)
    members = []
    for g0 in minimal_fixed_sets(cycle.cells[0], trip.image):
        comps = [g0]
        cur = g0
        for st in steps[:-1]:
            cur = st.image(cur)
            comps.append(cur)
        members.append(tuple(comps))
    return frozenset(members)


def delta_bruteforce(mdp: Mdp, cycle: Cycle, limit: int = 12) -> Family:
    """Oracle: enumerate every candidate start subset and keep the minimal ones.

    Refuses starting cells larger than ``limit`` members; enumeration is
    exponential in the cell size by design.
    """
    start = cycle.cells[0]
    if start.bit_count() > limit:
        raise ValueError(
            f"starting cell has {start.bit_count()} members, oracle limit is {limit}"
        )
    steps = _step_relations(mdp, cycle)
    sequences = []
    for g0 in subsets(start):
        comps = [g0]
        cur = g0
        for st in steps:
            cur = st.image(cur)
            comps.append(cur)
        if cur == g0:
            sequences.append(tuple(comps[:-1]))
    minimal = [
        g
        for g in sequences
        if not any(
            h != g and all(is_subset(hi, gi) for hi, gi in zip(h, g))
            for h in sequences
        )
    ]
    return frozenset(minimal)


def family_satisfies(family: Family, objective: str) -> bool:
    """Witness test on a precomputed family: one member, singleton components."""
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if len(family) != 1:
        return False
    (member,) = family
    if objective == STRONG:
        return all(g.bit_count() == 1 for g in member)
    return any(g.bit_count() == 1 for g in member)


def is_witness(mdp: Mdp, cycle: Cycle, objective: str) -> bool:
    """Does the cycle witness the objective (all/some components collapse)?"""
    return family_satisfies(delta(mdp, cycle), objective)
