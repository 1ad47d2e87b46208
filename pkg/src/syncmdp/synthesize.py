"""Turn witnesses into pure eventually periodic strategies and certificates.

The synthesized strategy replays the witness: access-path letters as the
prefix, cycle letters repeating as the period. The companion product chain
unrolls (phase, state) pairs so that the strategy's distribution sequence
becomes the power iteration of a plain Markov chain with the same norms; its
recurrent states certify the collapse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .bitset import bits
from .decide import Verification, Witness, verify_witness
from .model import Distribution, MarkovChain, Mdp, is_deterministic
from .subset import BLIND, Letter, successor


@dataclass(frozen=True)
class Strategy:
    """Pure, eventually periodic decision rule.

    Step k uses prefix[k] for k < m and period[(k - m) % d] afterwards.
    States a perfect letter does not cover get ``default_action``; under the
    synthesized run they carry zero probability, so the filler never matters.
    """

    mode: str
    prefix: tuple[Letter, ...]
    period: tuple[Letter, ...]
    default_action: int = 0

    def __post_init__(self) -> None:
        if len(self.period) < 1:
            raise ValueError("period must have length >= 1")

    @property
    def m(self) -> int:
        return len(self.prefix)

    @property
    def d(self) -> int:
        return len(self.period)

    def letter_at(self, step: int) -> Letter:
        if step < self.m:
            return self.prefix[step]
        return self.period[(step - self.m) % self.d]

    def action_at(self, step: int, state: int) -> int:
        letter = self.letter_at(step)
        if letter.mode == BLIND:
            return letter.act(state)
        try:
            return letter.act(state)
        except ValueError:
            return self.default_action


@dataclass(frozen=True)
class ProductChain:
    """Phase-unrolled Markov chain of an eventually periodic strategy.

    ``pairs[i]`` names product state i as (phase, mdp state index); phases
    0..m-1 follow the prefix, phases m..m+d-1 loop through the period. Only
    pairs whose state lies in the phase's support cell are materialized.
    """

    chain: MarkovChain
    pairs: tuple[tuple[int, int], ...]
    m: int
    d: int

    def mass_by_state(self, probs: Sequence[float], n_states: int) -> list[float]:
        out = [0.0] * n_states
        for i, (_, s) in enumerate(self.pairs):
            out[s] += probs[i]
        return out


def strategy_from_witness(
    mdp: Mdp, witness: Witness, mode: str, objective: str
) -> Strategy:
    """Prefix = access letters, period = cycle letters; refuses bad witnesses."""
    check: Verification = verify_witness(mdp, witness, mode, objective)
    if not check:
        raise ValueError(f"witness does not verify: {check.reason}")
    return Strategy(mode, witness.access_letters, witness.cycle.letters)


def _phase_cells(mdp: Mdp, strategy: Strategy) -> tuple[list[int], int, int]:
    """Support cells per phase, unrolling the period until it closes.

    Witness strategies close after one round; for hand-written strategies the
    period is unrolled (and the prefix extended) until the support at the
    period boundary repeats, which must happen within the number of cells.
    """
    cells = [mdp.initial_support]
    for letter in strategy.prefix:
        cells.append(successor(mdp, cells[-1], letter))

    rounds: list[int] = [cells[-1]]
    limit = 1 << mdp.n_states
    while True:
        for letter in strategy.period:
            cells.append(successor(mdp, cells[-1], letter))
        boundary = cells[-1]
        if boundary in rounds:
            first = rounds.index(boundary)
            m = strategy.m + first * strategy.d
            d = (len(rounds) - first) * strategy.d
            return cells[: m + d + 1], m, d
        rounds.append(boundary)
        if len(rounds) > limit:
            raise RuntimeError("period supports failed to close")


def product_chain(mdp: Mdp, strategy: Strategy) -> ProductChain:
    """Build the certifying (phase, state) chain for ``strategy``."""
    cells, m, d = _phase_cells(mdp, strategy)
    pairs: list[tuple[int, int]] = []
    index: dict[tuple[int, int], int] = {}
    for phase in range(m + d):
        for s in bits(cells[phase]):
            index[(phase, s)] = len(pairs)
            pairs.append((phase, s))

    n = len(pairs)
    names = tuple(f"{phase}:{mdp.states[s]}" for phase, s in pairs)
    init = [0.0] * n
    for s in bits(cells[0]):
        init[index[(0, s)]] = mdp.initial[s]

    rows = []
    for phase, s in pairs:
        nxt = phase + 1 if phase + 1 < m + d else m
        action = strategy.action_at(phase, s)
        dist = mdp.rows[s][action]
        probs = [0.0] * n
        for t in bits(dist.support):
            probs[index[(nxt, t)]] = dist[t]
        rows.append(Distribution(tuple(probs)))

    chain = MarkovChain(names, Distribution(tuple(init)), tuple(rows))
    return ProductChain(chain, tuple(pairs), m, d)


class NotDeterministic(ValueError):
    """Raised when an operation needs point-mass rows but the MDP has branches."""


def extract_sync_word(mdp: Mdp, witness: Witness) -> tuple[int, ...]:
    """Reset word of a deterministic MDP from a blind strong witness.

    Plays the access actions, then cycle actions until the cell tracked from
    the full state set collapses to a singleton. With the DFA convention
    (initial support = all states) the witness guarantees collapse within
    |cell| rounds of the cycle; otherwise a non-collapsing full-set cell is
    reported as an error.
    """
    if not is_deterministic(mdp):
        raise NotDeterministic("transition rows are not all point masses")
    for letter in witness.access_letters + witness.cycle.letters:
        if letter.mode != BLIND:
            raise ValueError("witness is not blind")

    word: list[int] = []
    cell = (1 << mdp.n_states) - 1
    for letter in witness.access_letters:
        word.append(letter.action)  # type: ignore[arg-type]
        cell = _blind_post(mdp, cell, letter.action)  # type: ignore[arg-type]

    rounds = 0
    while cell.bit_count() > 1:
        before = cell
        for letter in witness.cycle.letters:
            if cell.bit_count() == 1:
                break
            word.append(letter.action)  # type: ignore[arg-type]
            cell = _blind_post(mdp, cell, letter.action)  # type: ignore[arg-type]
        rounds += 1
        if cell == before and cell.bit_count() > 1:
            raise ValueError("cycle does not collapse the full state set")
        if rounds > mdp.n_states + 1:
            raise ValueError("cycle does not collapse the full state set")
    return tuple(word)


def _blind_post(mdp: Mdp, cell: int, action: int) -> int:
    out = 0
    for s in bits(cell):
        out |= mdp.post_masks[s][action]
    return out
