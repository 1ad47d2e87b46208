"""Blind and perfect-information subset constructions, built on the fly.

A cell is a nonempty bitset of MDP states. A letter is what a strategy can do
in one step at a cell: in blind mode a single action applied to every member,
in perfect mode an independent action choice per member. Perfect letters are
restricted to their cell; choices outside the cell are irrelevant to the
successor, so two assignments agreeing on the cell are the same letter.

Everything here is support-level: no probabilities, only bitset algebra.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterator

from .bitset import bits
from .model import Mdp

BLIND = "blind"
PERFECT = "perfect"
MODES = (BLIND, PERFECT)


@dataclass(frozen=True)
class Letter:
    """One step of control: a blind action or a per-state assignment.

    ``assignment`` pairs (state index, action index) in ascending state order
    and is exactly total on the letter's cell.
    """

    mode: str
    action: int | None = None
    assignment: tuple[tuple[int, int], ...] = ()

    @cached_property
    def _lookup(self) -> dict[int, int]:
        return dict(self.assignment)

    @cached_property
    def domain(self) -> int:
        """Cell the letter is defined on (perfect mode only)."""
        m = 0
        for s, _ in self.assignment:
            m |= 1 << s
        return m

    def act(self, state: int) -> int:
        """Action chosen at ``state``; raises off-cell in perfect mode."""
        if self.mode == BLIND:
            assert self.action is not None
            return self.action
        try:
            return self._lookup[state]
        except KeyError:
            raise ValueError(f"letter not defined on state index {state}") from None

    def covers(self, cell: int) -> bool:
        return self.mode == BLIND or cell | self.domain == self.domain

    def describe(self, mdp: Mdp) -> str | dict[str, str]:
        """Name-level view used by reports and strategy documents."""
        if self.mode == BLIND:
            return mdp.actions[self.action]  # type: ignore[index]
        return {mdp.states[s]: mdp.actions[a] for s, a in self.assignment}


def blind_letter(action: int) -> Letter:
    return Letter(BLIND, action=action)


def perfect_letter(assignment: dict[int, int] | tuple[tuple[int, int], ...]) -> Letter:
    pairs = tuple(sorted(dict(assignment).items()))
    return Letter(PERFECT, assignment=pairs)


def letters(mdp: Mdp, cell: int, mode: str) -> Iterator[Letter]:
    """Enumerate the letters available at ``cell``, in canonical order.

    Blind mode yields one letter per action, in declaration order. Perfect
    mode yields every assignment on the cell's members, lexicographically with
    earlier members most significant: |actions| ** |cell| letters.
    """
    if mode == BLIND:
        for a in range(mdp.n_actions):
            yield blind_letter(a)
    elif mode == PERFECT:
        members = list(bits(cell))
        for choice in product(range(mdp.n_actions), repeat=len(members)):
            yield Letter(PERFECT, assignment=tuple(zip(members, choice)))
    else:
        raise ValueError(f"unknown mode {mode!r}")


def successor(mdp: Mdp, cell: int, letter: Letter) -> int:
    """Union of the per-member supports: the letter's successor cell."""
    if cell == 0:
        raise ValueError("cell is empty")
    if not letter.covers(cell):
        raise ValueError("letter does not cover the cell")
    out = 0
    for s in bits(cell):
        out |= mdp.post_masks[s][letter.act(s)]
    return out


@dataclass
class ReachabilityIndex:
    """Cells reachable from the initial support, with shortest access paths.

    ``parent`` maps each reachable cell to the (cell, letter) edge it was
    first discovered by; the initial cell maps to None. Breadth-first
    discovery with canonical letter order makes paths minimal and ties
    deterministic.
    """

    initial: int
    cells: tuple[int, ...]
    parent: dict[int, tuple[int, Letter] | None] = field(repr=False)

    def __contains__(self, cell: int) -> bool:
        return cell in self.parent

    def access_letters(self, cell: int) -> tuple[Letter, ...]:
        if cell not in self.parent:
            raise ValueError("cell is not reachable")
        out: list[Letter] = []
        cur = cell
        while True:
            edge = self.parent[cur]
            if edge is None:
                break
            cur, letter = edge
            out.append(letter)
        out.reverse()
        return tuple(out)

    def access_cells(self, cell: int) -> tuple[int, ...]:
        if cell not in self.parent:
            raise ValueError("cell is not reachable")
        out = [cell]
        cur = cell
        while True:
            edge = self.parent[cur]
            if edge is None:
                break
            cur = edge[0]
            out.append(cur)
        out.reverse()
        return tuple(out)


def reachable(mdp: Mdp, mode: str) -> ReachabilityIndex:
    """Breadth-first closure of the subset construction from Supp(initial)."""
    start = mdp.initial_support
    parent: dict[int, tuple[int, Letter] | None] = {start: None}
    order = [start]
    queue = deque([start])
    while queue:
        cell = queue.popleft()
        for letter in letters(mdp, cell, mode):
            nxt = successor(mdp, cell, letter)
            if nxt not in parent:
                parent[nxt] = (cell, letter)
                order.append(nxt)
                queue.append(nxt)
    return ReachabilityIndex(start, tuple(order), parent)
