"""Interchange formats, generators, and the reset-word search.

MDP documents are JSON with fixed keys: states, actions, initial,
transitions. Transitions map state -> action -> list of {target, prob}
entries. Identifier order in the document is the canonical order everywhere.
An optional top-level "notes" object is ignored (fixture annotations).

Serialization is canonical (insertion-ordered keys, repr-exact floats), so
parse and serialize are inverse on documents this module produces.
"""

from __future__ import annotations

import json
import math
import random
import warnings
from collections import deque

from .bitset import bits
from .model import Distribution, Mdp, is_deterministic, validate
from .subset import BLIND, PERFECT, Letter, blind_letter, perfect_letter
from .synthesize import NotDeterministic, Strategy

ZERO_CLIP = 1e-12

DOC_KEYS = {"states", "actions", "initial", "transitions", "notes"}


class ParseError(ValueError):
    """Malformed or invalid document, with enough context to locate the issue."""


class FormatWarning(UserWarning):
    pass


def parse_mdp(text: str) -> Mdp:
    """Parse and validate an MDP document; raise ParseError with context."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("document root must be an object")
    unknown = set(doc) - DOC_KEYS
    if unknown:
        raise ParseError(f"unknown top-level keys {sorted(unknown)}")
    for key in ("states", "actions", "initial", "transitions"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")

    states = list(doc["states"])
    actions = list(doc["actions"])
    if not all(isinstance(s, str) for s in states):
        raise ParseError("states must be strings")
    if not all(isinstance(a, str) for a in actions):
        raise ParseError("actions must be strings")
    if len(set(states)) != len(states):
        raise ParseError("duplicate state names")
    if len(set(actions)) != len(actions):
        raise ParseError("duplicate action names")
    state_ix = {s: i for i, s in enumerate(states)}
    n = len(states)

    def read_entries(entries: dict[str, float], where: str) -> Distribution:
        probs = [0.0] * n
        for name, p in entries.items():
            if name not in state_ix:
                raise ParseError(f"{where}: unknown state {name!r}")
            if not isinstance(p, (int, float)):
                raise ParseError(f"{where}: probability for {name!r} is not a number")
            p = float(p)
            if 0.0 < p < ZERO_CLIP:
                warnings.warn(
                    f"{where}: entry {p!r} for {name!r} below {ZERO_CLIP}, treated as zero",
                    FormatWarning,
                    stacklevel=2,
                )
                p = 0.0
            probs[state_ix[name]] += p
        return Distribution(tuple(probs))

    if not isinstance(doc["initial"], dict):
        raise ParseError("initial must map state names to probabilities")
    initial = read_entries(doc["initial"], "initial")

    trans = doc["transitions"]
    if not isinstance(trans, dict):
        raise ParseError("transitions must be an object")
    unknown_states = set(trans) - set(states)
    if unknown_states:
        raise ParseError(f"transitions for unknown states {sorted(unknown_states)}")
    rows = []
    for s in states:
        if s not in trans:
            raise ParseError(f"state {s!r} has no transitions")
        per_state = []
        row_map = trans[s]
        unknown_actions = set(row_map) - set(actions)
        if unknown_actions:
            raise ParseError(f"state {s!r}: unknown actions {sorted(unknown_actions)}")
        for a in actions:
            if a not in row_map:
                raise ParseError(f"missing row ({s!r}, {a!r})")
            entries: dict[str, float] = {}
            if not isinstance(row_map[a], list):
                raise ParseError(f"row ({s!r}, {a!r}) must be a list of entries")
            for item in row_map[a]:
                if not isinstance(item, dict) or set(item) != {"target", "prob"}:
                    raise ParseError(
                        f"row ({s!r}, {a!r}): entries need exactly target and prob"
                    )
                entries[item["target"]] = entries.get(item["target"], 0.0) + float(
                    item["prob"]
                )
            per_state.append(read_entries(entries, f"row ({s!r}, {a!r})"))
        rows.append(tuple(per_state))

    mdp = Mdp(tuple(states), tuple(actions), initial, tuple(rows))
    problems = validate(mdp)
    if problems:
        raise ParseError("; ".join(problems))
    return mdp


def serialize_mdp(mdp: Mdp, notes: dict | None = None) -> str:
    doc: dict = {
        "states": list(mdp.states),
        "actions": list(mdp.actions),
        "initial": {
            mdp.states[i]: mdp.initial[i] for i in bits(mdp.initial.support)
        },
        "transitions": {
            s: {
                a: [
                    {"target": mdp.states[t], "prob": dist[t]}
                    for t in bits(dist.support)
                ]
                for a, dist in zip(mdp.actions, per_state)
            }
            for s, per_state in zip(mdp.states, mdp.rows)
        },
    }
    if notes:
        doc["notes"] = notes
    return json.dumps(doc, indent=2) + "\n"


def parse_strategy(text: str, mdp: Mdp) -> Strategy:
    """Parse a strategy document against an MDP's identifiers."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict) or not {"mode", "prefix", "period"} <= set(doc):
        raise ParseError("strategy needs keys mode, prefix, period")
    mode = doc["mode"]
    if mode not in (BLIND, PERFECT):
        raise ParseError(f"unknown mode {mode!r}")

    def read_letter(item, where: str) -> Letter:
        if mode == BLIND:
            if not isinstance(item, str):
                raise ParseError(f"{where}: blind letters are action names")
            return blind_letter(mdp.action_index(item))
        if not isinstance(item, dict) or not item:
            raise ParseError(f"{where}: perfect letters are nonempty state->action maps")
        return perfect_letter(
            {mdp.state_index(s): mdp.action_index(a) for s, a in item.items()}
        )

    prefix = tuple(
        read_letter(item, f"prefix[{i}]") for i, item in enumerate(doc["prefix"])
    )
    period = tuple(
        read_letter(item, f"period[{i}]") for i, item in enumerate(doc["period"])
    )
    if not period:
        raise ParseError("period must not be empty")
    return Strategy(mode, prefix, period)


def serialize_strategy(strategy: Strategy, mdp: Mdp) -> str:
    doc = {
        "mode": strategy.mode,
        "prefix": [letter.describe(mdp) for letter in strategy.prefix],
        "period": [letter.describe(mdp) for letter in strategy.period],
    }
    return json.dumps(doc, indent=2) + "\n"


def gen_cerny(n: int) -> Mdp:
    """Rotate-or-merge automaton on n states as a deterministic MDP.

    Action "r" rotates every state forward; action "s" moves state 0 onto
    state 1 and fixes the rest. Initial distribution uniform over all states.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    states = tuple(str(i) for i in range(n))
    rows = []
    for i in range(n):
        rot = Distribution.point(n, (i + 1) % n)
        merge = Distribution.point(n, 1 if i == 0 else i)
        rows.append((rot, merge))
    initial = Distribution(tuple(1.0 / n for _ in range(n)))
    return Mdp(states, ("r", "s"), initial, tuple(rows))


def gen_random(num_states: int, num_actions: int, branching: int, seed: int) -> Mdp:
    """Reproducible random MDP; same arguments give identical documents.

    Each row draws ``branching`` distinct targets and unit-shifted exponential
    weights, which keeps every positive probability comfortably away from
    zero. The initial distribution is uniform over a random nonempty subset.
    """
    if num_states < 1 or num_actions < 1:
        raise ValueError("sizes must be positive")
    if not 1 <= branching <= num_states:
        raise ValueError("branching must lie in [1, num_states]")
    rng = random.Random(seed)
    states = tuple(f"q{i}" for i in range(num_states))
    actions = tuple(f"a{j}" for j in range(num_actions))
    rows = []
    for _ in range(num_states):
        per_state = []
        for _ in range(num_actions):
            targets = sorted(rng.sample(range(num_states), branching))
            weights = [1.0 + rng.expovariate(1.0) for _ in targets]
            total = math.fsum(weights)
            probs = [0.0] * num_states
            for t, w in zip(targets, weights):
                probs[t] = w / total
            per_state.append(Distribution(tuple(probs)))
        rows.append(tuple(per_state))
    support = sorted(rng.sample(range(num_states), rng.randint(1, num_states)))
    initial = Distribution.from_map(
        num_states, {i: 1.0 / len(support) for i in support}
    )
    return Mdp(states, actions, initial, tuple(rows))


def shortest_sync_word(mdp: Mdp) -> tuple[int, ...] | None:
    """Shortest reset word of a deterministic MDP, or None when there is none.

    Breadth-first search in the blind subset construction from the full state
    set to any singleton; independent of the initial distribution.
    """
    if not is_deterministic(mdp):
        raise NotDeterministic("transition rows are not all point masses")
    full = (1 << mdp.n_states) - 1
    if full.bit_count() == 1:
        return ()
    parent: dict[int, tuple[int, int] | None] = {full: None}
    queue = deque([full])
    while queue:
        cell = queue.popleft()
        for a in range(mdp.n_actions):
            nxt = 0
            for s in bits(cell):
                nxt |= mdp.post_masks[s][a]
            if nxt in parent:
                continue
            parent[nxt] = (cell, a)
            if nxt.bit_count() == 1:
                word = []
                cur = nxt
                while parent[cur] is not None:
                    cur, act = parent[cur]  # type: ignore[misc]
                    word.append(act)
                word.reverse()
                return tuple(word)
            queue.append(nxt)
    return None
