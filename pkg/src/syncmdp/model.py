"""Core data model: MDPs, Markov chains, stochastic rows, state classification.

States and actions are strings at the boundary and dense indices internally;
the declaration order of the identifiers is the canonical ordering everywhere
(cell enumeration, letter enumeration, reports). State sets are integer
bitsets over the dense indices, see :mod:`syncmdp.bitset`.

Probabilities are double-precision floats. All qualitative analysis downstream
(subset constructions, cycle families, decision procedures) consumes supports
only, so rounding in the probabilities cannot flip a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, Sequence

from .bitset import bits, mask_of

ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class Distribution:
    """Probability vector over dense state indices 0..n-1."""

    probs: tuple[float, ...]

    @cached_property
    def support(self) -> int:
        """Bitset of indices carrying positive probability."""
        m = 0
        for i, p in enumerate(self.probs):
            if p > 0.0:
                m |= 1 << i
        return m

    def __getitem__(self, i: int) -> float:
        return self.probs[i]

    def __len__(self) -> int:
        return len(self.probs)

    def total(self) -> float:
        return sum(self.probs)

    @classmethod
    def point(cls, n: int, i: int) -> "Distribution":
        return cls(tuple(1.0 if j == i else 0.0 for j in range(n)))

    @classmethod
    def from_map(cls, n: int, entries: Mapping[int, float]) -> "Distribution":
        probs = [0.0] * n
        for i, p in entries.items():
            probs[i] = p
        return cls(tuple(probs))


@dataclass(frozen=True)
class Mdp:
    """Finite MDP: states, actions, initial distribution, stochastic rows.

    ``rows[s][a]`` is the successor distribution for state index ``s`` under
    action index ``a``. The map is total: every state has a row for every
    action.
    """

    states: tuple[str, ...]
    actions: tuple[str, ...]
    initial: Distribution
    rows: tuple[tuple[Distribution, ...], ...]

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_actions(self) -> int:
        return len(self.actions)

    @cached_property
    def min_prob(self) -> float:
        """Smallest positive transition probability over all rows."""
        lo = float("inf")
        for per_state in self.rows:
            for dist in per_state:
                for p in dist.probs:
                    if 0.0 < p < lo:
                        lo = p
        return lo

    @cached_property
    def post_masks(self) -> tuple[tuple[int, ...], ...]:
        """Support bitset of every (state, action) row."""
        return tuple(
            tuple(dist.support for dist in per_state) for per_state in self.rows
        )

    @cached_property
    def initial_support(self) -> int:
        return self.initial.support

    @cached_property
    def _state_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.states)}

    @cached_property
    def _action_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.actions)}

    def state_index(self, name: str) -> int:
        try:
            return self._state_index[name]
        except KeyError:
            raise ValueError(f"unknown state {name!r}") from None

    def action_index(self, name: str) -> int:
        try:
            return self._action_index[name]
        except KeyError:
            raise ValueError(f"unknown action {name!r}") from None

    def state_names(self, mask: int) -> list[str]:
        """Names of the states in a bitset, in canonical (declaration) order."""
        return [self.states[i] for i in bits(mask)]

    def cell(self, *names: str) -> int:
        """Bitset for the named states (test and fixture convenience)."""
        return mask_of(self.state_index(n) for n in names)


@dataclass(frozen=True)
class MarkovChain:
    """Markov chain: one stochastic row per state."""

    states: tuple[str, ...]
    initial: Distribution
    rows: tuple[Distribution, ...]

    @property
    def n_states(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class StateClassification:
    """Recurrent/transient split of a Markov chain's states.

    A state is recurrent when every state accessible from it can access it
    back; ``classes`` are the terminal strongly connected components, which
    partition exactly the recurrent states.
    """

    recurrent: int
    classes: tuple[int, ...]

    def is_recurrent(self, state: int) -> bool:
        return bool(self.recurrent >> state & 1)

    def transient(self, n_states: int) -> int:
        return ((1 << n_states) - 1) & ~self.recurrent


def validate(mdp: Mdp) -> list[str]:
    """Return all invariant violations of ``mdp``; empty list means valid."""
    problems: list[str] = []
    if not mdp.states:
        problems.append("state set is empty")
    if not mdp.actions:
        problems.append("action set is empty")
    if len(set(mdp.states)) != len(mdp.states):
        problems.append("duplicate state names")
    if len(set(mdp.actions)) != len(mdp.actions):
        problems.append("duplicate action names")
    n = mdp.n_states

    def check_dist(dist: Distribution, where: str) -> None:
        if len(dist) != n:
            problems.append(f"{where}: length {len(dist)} != {n} states")
            return
        for i, p in enumerate(dist.probs):
            if p < 0.0:
                problems.append(f"{where}: negative probability for {mdp.states[i]!r}")
            if p > 1.0 + ROW_SUM_TOL:
                problems.append(f"{where}: probability > 1 for {mdp.states[i]!r}")
        total = sum(dist.probs)
        if abs(total - 1.0) > ROW_SUM_TOL:
            problems.append(f"{where}: entries sum to {total!r}, not 1")
        if dist.support == 0:
            problems.append(f"{where}: empty support")

    check_dist(mdp.initial, "initial distribution")
    if len(mdp.rows) != n:
        problems.append(f"transition table has {len(mdp.rows)} state rows, expected {n}")
        return problems
    for s, per_state in enumerate(mdp.rows):
        if len(per_state) != mdp.n_actions:
            problems.append(
                f"state {mdp.states[s]!r}: {len(per_state)} action rows, "
                f"expected {mdp.n_actions}"
            )
            continue
        for a, dist in enumerate(per_state):
            check_dist(dist, f"row ({mdp.states[s]!r}, {mdp.actions[a]!r})")
    return problems


def make_mdp(
    states: Sequence[str],
    actions: Sequence[str],
    initial: Mapping[str, float],
    transitions: Mapping[str, Mapping[str, Mapping[str, float]]],
) -> Mdp:
    """Build and validate an Mdp from name-keyed maps; raise on violations."""
    state_ix = {name: i for i, name in enumerate(states)}
    action_ix = {name: i for i, name in enumerate(actions)}
    n = len(states)

    def dist_of(entries: Mapping[str, float], where: str) -> Distribution:
        probs = [0.0] * n
        for name, p in entries.items():
            if name not in state_ix:
                raise ValueError(f"{where}: unknown state {name!r}")
            probs[state_ix[name]] += float(p)
        return Distribution(tuple(probs))

    rows = []
    for s in states:
        if s not in transitions:
            raise ValueError(f"no transitions declared for state {s!r}")
        per_state = []
        for a in actions:
            if a not in transitions[s]:
                raise ValueError(f"no row for ({s!r}, {a!r})")
            per_state.append(dist_of(transitions[s][a], f"row ({s!r}, {a!r})"))
        extra = set(transitions[s]) - set(actions)
        if extra:
            raise ValueError(f"state {s!r}: unknown actions {sorted(extra)}")
        rows.append(tuple(per_state))
    extra_states = set(transitions) - set(states)
    if extra_states:
        raise ValueError(f"transitions for unknown states {sorted(extra_states)}")

    mdp = Mdp(tuple(states), tuple(actions), dist_of(initial, "initial"), tuple(rows))
    problems = validate(mdp)
    if problems:
        raise ValueError("invalid MDP: " + "; ".join(problems))
    return mdp


def post(mdp: Mdp, state: int, action: int) -> int:
    """Support bitset of the (state, action) row."""
    if not 0 <= state < mdp.n_states:
        raise ValueError(f"state index {state} out of range")
    if not 0 <= action < mdp.n_actions:
        raise ValueError(f"action index {action} out of range")
    return mdp.post_masks[state][action]


def classify(mc: MarkovChain) -> StateClassification:
    """Tag every chain state recurrent or transient via terminal SCCs."""
    n = mc.n_states
    succ = [mc.rows[s].support for s in range(n)]

    # Iterative Tarjan over the support graph.
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    sccs: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, iter(bits(succ[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(bits(succ[w]))))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(comp)

    classes = []
    recurrent = 0
    for comp in sccs:
        comp_mask = mask_of(comp)
        terminal = all(succ[v] | comp_mask == comp_mask for v in comp)
        if terminal:
            classes.append(comp_mask)
            recurrent |= comp_mask
    return StateClassification(recurrent, tuple(sorted(classes)))


def induced_chain(mdp: Mdp, rule: Sequence[int]) -> MarkovChain:
    """Markov chain induced by a pure memoryless rule (state index -> action)."""
    if len(rule) != mdp.n_states:
        raise ValueError(
            f"rule covers {len(rule)} states, MDP has {mdp.n_states}"
        )
    rows = []
    for s, a in enumerate(rule):
        if not 0 <= a < mdp.n_actions:
            raise ValueError(f"rule maps state {mdp.states[s]!r} to bad action {a}")
        rows.append(mdp.rows[s][a])
    return MarkovChain(mdp.states, mdp.initial, tuple(rows))


def uniform_chain(mdp: Mdp) -> MarkovChain:
    """Chain of the uniformly randomizing strategy: rows averaged over actions."""
    k = mdp.n_actions
    rows = []
    for per_state in mdp.rows:
        avg = [0.0] * mdp.n_states
        for dist in per_state:
            for i, p in enumerate(dist.probs):
                avg[i] += p / k
        rows.append(Distribution(tuple(avg)))
    return MarkovChain(mdp.states, mdp.initial, tuple(rows))


def is_deterministic(mdp: Mdp) -> bool:
    """True when every transition row is a point mass (the DFA convention)."""
    return all(
        mask & (mask - 1) == 0
        for per_state in mdp.post_masks
        for mask in per_state
    )
