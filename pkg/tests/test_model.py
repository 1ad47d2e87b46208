from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
import hypothesis.strategies as st

from syncmdp import (
    Distribution,
    MarkovChain,
    Mdp,
    classify,
    gen_random,
    induced_chain,
    is_deterministic,
    make_mdp,
    post,
    uniform_chain,
    validate,
)
from util import accessible_set, small_mdps


def one_state_mdp() -> Mdp:
    return make_mdp(["only"], ["go"], {"only": 1.0}, {"only": {"go": {"only": 1.0}}})


def test_validate_degenerate_ok():
    assert validate(one_state_mdp()) == []


def test_validate_reports_bad_row_sum():
    bad = Mdp(
        ("a", "b"),
        ("x",),
        Distribution((1.0, 0.0)),
        ((Distribution((0.4, 0.5)),), (Distribution((0.0, 1.0)),)),
    )
    problems = validate(bad)
    assert len(problems) == 1
    assert "'a'" in problems[0] and "'x'" in problems[0]


def test_validate_fixture_ok(branch_or_stay):
    assert validate(branch_or_stay) == []


def test_post_values(branch_or_stay):
    m = branch_or_stay
    assert post(m, m.state_index("1"), m.action_index("s1")) == m.cell("2", "3")
    assert post(m, m.state_index("1"), m.action_index("s2")) == m.cell("1")


def test_post_self_loop():
    m = one_state_mdp()
    assert post(m, 0, 0) == 1


def test_post_rejects_unknown_indices(branch_or_stay):
    with pytest.raises(ValueError):
        post(branch_or_stay, 99, 0)
    with pytest.raises(ValueError):
        post(branch_or_stay, 0, 99)


def chain_of(rows: dict[str, dict[str, float]], init: str) -> MarkovChain:
    states = list(rows)
    mdp = make_mdp(states, ["t"], {init: 1.0}, {s: {"t": r} for s, r in rows.items()})
    return induced_chain(mdp, [0] * len(states))


def test_classify_absorbing_tail():
    mc = chain_of({"a": {"b": 1.0}, "b": {"c": 1.0}, "c": {"c": 1.0}}, "a")
    cls = classify(mc)
    assert cls.recurrent == 0b100
    assert cls.classes == (0b100,)
    assert cls.transient(3) == 0b011


def test_classify_three_cycle():
    mc = chain_of({"a": {"b": 1.0}, "b": {"c": 1.0}, "c": {"a": 1.0}}, "a")
    cls = classify(mc)
    assert cls.recurrent == 0b111
    assert cls.classes == (0b111,)


def brute_classification(mc: MarkovChain) -> int:
    """Oracle: recurrent iff every accessible state accesses the state back."""
    succ = [mc.rows[s].support for s in range(mc.n_states)]
    acc = [accessible_set(succ, s) for s in range(mc.n_states)]
    recurrent = 0
    for s in range(mc.n_states):
        if all(acc[t] >> s & 1 for t in range(mc.n_states) if acc[s] >> t & 1):
            recurrent |= 1 << s
    return recurrent


def test_classify_matches_bruteforce_on_random_chains():
    for seed in range(40):
        mdp = gen_random(6, 1, 2 + seed % 3, seed)
        mc = induced_chain(mdp, [0] * 6)
        assert classify(mc).recurrent == brute_classification(mc), f"seed {seed}"


@given(small_mdps(max_states=5))
@settings(max_examples=60, deadline=None)
def test_classify_partitions_states(mdp):
    mc = induced_chain(mdp, [0] * mdp.n_states)
    cls = classify(mc)
    covered = 0
    for c in cls.classes:
        assert covered & c == 0
        covered |= c
    assert covered == cls.recurrent
    # successors of a recurrent state stay inside its class
    for c in cls.classes:
        m = c
        while m:
            low = m & -m
            s = low.bit_length() - 1
            assert mc.rows[s].support | c == c
            m ^= low


def test_induced_chain_single_action_is_the_mdp():
    m = one_state_mdp()
    mc = induced_chain(m, [0])
    assert mc.rows[0] == m.rows[0][0]


def test_induced_chain_selects_rows(branch_or_stay):
    m = branch_or_stay
    rule = [m.action_index("s2"), 0, 0, 0]
    mc = induced_chain(m, rule)
    assert mc.rows[m.state_index("1")].probs[m.state_index("1")] == 1.0


def test_induced_chain_random_rule_row_selection():
    rng = random.Random(7)
    for seed in range(20):
        mdp = gen_random(4, 2, 2, seed)
        rule = [rng.randrange(2) for _ in range(4)]
        mc = induced_chain(mdp, rule)
        for s in range(4):
            assert mc.rows[s] == mdp.rows[s][rule[s]]


def test_induced_chain_rejects_partial_rule(branch_or_stay):
    with pytest.raises(ValueError):
        induced_chain(branch_or_stay, [0, 0])


@given(small_mdps())
@settings(max_examples=60, deadline=None)
def test_min_prob_positive(mdp):
    assert mdp.min_prob > 0.0
    lo = min(
        p for per in mdp.rows for dist in per for p in dist.probs if p > 0.0
    )
    assert mdp.min_prob == lo


def test_uniform_chain_averages_rows(branch_or_stay):
    m = branch_or_stay
    mc = uniform_chain(m)
    s1 = m.state_index("1")
    assert mc.rows[s1].probs[m.state_index("1")] == pytest.approx(0.5)
    assert mc.rows[s1].probs[m.state_index("2")] == pytest.approx(0.25)


def test_is_deterministic(branch_or_stay):
    assert not is_deterministic(branch_or_stay)
    assert is_deterministic(one_state_mdp())
