"""Command-line surface: validate, decide, synthesize, simulate, oracles, generators.

Exit codes for decide/synthesize follow the verdict: 0 yes, 1 no,
2 inconclusive-limit; 3 signals runtime errors (unreadable or invalid input)
and 64 usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from . import __version__
from .bitset import bits
from .cycles import Cycle, delta, delta_bruteforce
from .decide import (
    DecideConfig,
    INCONCLUSIVE,
    NO,
    Verdict,
    Witness,
    YES,
    bounded_cycle_search,
    decide,
)
from .formats import (
    ParseError,
    gen_cerny,
    gen_random,
    parse_mdp,
    parse_strategy,
    serialize_mdp,
    serialize_strategy,
    shortest_sync_word,
)
from .model import Mdp, validate
from .simulate import check_sync, default_epsilon, default_horizon, simulate
from .subset import BLIND, PERFECT, blind_letter, perfect_letter
from .synthesize import NotDeterministic, Strategy, strategy_from_witness

EXIT_BY_ANSWER = {YES: 0, NO: 1, INCONCLUSIVE: 2}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(64)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _load_mdp(path: str) -> Mdp:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        mdp = parse_mdp(_read_text(path))
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    return mdp


def _names(mdp: Mdp, mask: int) -> list[str]:
    return mdp.state_names(mask)


def _letter_json(mdp: Mdp, letter) -> object:
    return letter.describe(mdp)


def _witness_json(mdp: Mdp, witness: Witness) -> dict:
    return {
        "access": [
            {"cell": _names(mdp, cell), "letter": _letter_json(mdp, letter)}
            for cell, letter in zip(witness.access_cells, witness.access_letters)
        ],
        "cycle": {
            "cells": [_names(mdp, c) for c in witness.cycle.cells],
            "letters": [_letter_json(mdp, l) for l in witness.cycle.letters],
        },
    }


def _family_json(mdp: Mdp, family) -> list:
    rendered = [[_names(mdp, g) for g in member] for member in sorted(family)]
    return rendered


def _report(
    mdp: Mdp,
    path: str,
    verdict: Verdict,
    config: dict,
    strategy: Strategy | None,
    empirical: dict | None,
) -> dict:
    return {
        "tool": "syncmdp",
        "version": __version__,
        "input": path,
        "config": config,
        "verdict": {
            "answer": verdict.answer,
            "mode": verdict.mode,
            "objective": verdict.objective,
        },
        "witness": _witness_json(mdp, verdict.witness) if verdict.witness else None,
        "delta": _family_json(mdp, verdict.witness.family) if verdict.witness else None,
        "strategy": json.loads(serialize_strategy(strategy, mdp)) if strategy else None,
        "empirical": empirical,
        "stats": {
            "nodes": verdict.stats.nodes,
            "anchors": verdict.stats.anchors,
            "elapsed_s": verdict.stats.elapsed,
        },
    }


def _run_decide(mdp: Mdp, args) -> Verdict:
    config = DecideConfig(max_nodes_per_anchor=args.max_nodes)
    if args.algorithm == "bounded":
        return bounded_cycle_search(mdp, args.mode, args.objective, args.bound, config)
    return decide(mdp, args.mode, args.objective, config)


def _empirical_summary(mdp: Mdp, strategy: Strategy, objective: str) -> dict:
    steps = default_horizon(mdp, strategy)
    epsilon = default_epsilon(mdp)
    window = strategy.d
    trace = simulate(mdp, strategy, steps)
    est = check_sync(trace, objective, epsilon, window)
    return {
        "objective": est.objective,
        "epsilon": est.epsilon,
        "window": est.window,
        "steps": steps,
        "verdict": est.verdict,
        "first_step": est.first_step,
        "violating_step": est.violating_step,
        "label": est.label,
    }


def cmd_validate(args) -> int:
    try:
        mdp = _load_mdp(args.mdp)
    except ParseError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    problems = validate(mdp)
    for p in problems:
        print(p, file=sys.stderr)
    if problems:
        return 1
    print(f"valid: {mdp.n_states} states, {mdp.n_actions} actions")
    return 0


def cmd_decide(args) -> int:
    mdp = _load_mdp(args.mdp)
    verdict = _run_decide(mdp, args)
    strategy = None
    empirical = None
    if verdict.witness is not None:
        strategy = strategy_from_witness(mdp, verdict.witness, args.mode, args.objective)
        if not args.no_simulate:
            empirical = _empirical_summary(mdp, strategy, args.objective)
    config = {
        "mode": args.mode,
        "objective": args.objective,
        "algorithm": args.algorithm,
        "bound": args.bound if args.algorithm == "bounded" else None,
        "max_nodes_per_anchor": args.max_nodes,
    }
    report = _report(mdp, args.mdp, verdict, config, strategy, empirical)
    text = json.dumps(report, indent=2)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n")
    return EXIT_BY_ANSWER[verdict.answer]


def cmd_synthesize(args) -> int:
    mdp = _load_mdp(args.mdp)
    verdict = _run_decide(mdp, args)
    if verdict.witness is None:
        print(f"no witness: verdict {verdict.answer}", file=sys.stderr)
        return EXIT_BY_ANSWER[verdict.answer]
    strategy = strategy_from_witness(mdp, verdict.witness, args.mode, args.objective)
    doc = serialize_strategy(strategy, mdp)
    Path(args.strategy_out).write_text(doc)
    print(f"strategy written to {args.strategy_out}")
    return 0


def cmd_simulate(args) -> int:
    mdp = _load_mdp(args.mdp)
    strategy = parse_strategy(_read_text(args.strategy), mdp)
    steps = args.steps if args.steps is not None else default_horizon(mdp, strategy)
    epsilon = args.epsilon if args.epsilon is not None else default_epsilon(mdp)
    window = args.window if args.window is not None else strategy.d
    trace = simulate(mdp, strategy, steps)
    summary = {
        "steps": steps,
        "epsilon": epsilon,
        "window": window,
        "estimates": {},
        "label": "empirical",
    }
    for objective in ("strong", "weak"):
        est = check_sync(trace, objective, epsilon, window)
        summary["estimates"][objective] = {
            "verdict": est.verdict,
            "first_step": est.first_step,
            "violating_step": est.violating_step,
        }
    print(json.dumps(summary, indent=2))
    if args.trace_out:
        lines = ["step,norm"]
        lines += [f"{i},{norm:.12g}" for i, norm in enumerate(trace.norms)]
        Path(args.trace_out).write_text("\n".join(lines) + "\n")
    return 0


def _parse_cycle_doc(mdp: Mdp, text: str) -> Cycle:
    doc = json.loads(text)
    if not isinstance(doc, dict) or not {"cells", "letters"} <= set(doc):
        raise ParseError("cycle document needs keys cells and letters")
    cells = tuple(mdp.cell(*names) for names in doc["cells"])
    letters = []
    for item in doc["letters"]:
        if isinstance(item, str):
            letters.append(blind_letter(mdp.action_index(item)))
        elif isinstance(item, dict):
            letters.append(
                perfect_letter(
                    {mdp.state_index(s): mdp.action_index(a) for s, a in item.items()}
                )
            )
        else:
            raise ParseError("letters are action names or state->action maps")
    cycle = Cycle(cells, tuple(letters))
    cycle.check(mdp)
    return cycle


def cmd_oracle_delta(args) -> int:
    mdp = _load_mdp(args.mdp)
    text = _read_text(args.cycle[1:]) if args.cycle.startswith("@") else args.cycle
    cycle = _parse_cycle_doc(mdp, text)
    fast = delta(mdp, cycle)
    slow = delta_bruteforce(mdp, cycle)
    out = {
        "delta": _family_json(mdp, fast),
        "delta_bruteforce": _family_json(mdp, slow),
        "agree": fast == slow,
    }
    print(json.dumps(out, indent=2))
    return 0 if fast == slow else 1


def cmd_gen(args) -> int:
    if args.generator == "cerny":
        mdp = gen_cerny(args.n)
    else:
        mdp = gen_random(args.states, args.actions, args.branching, args.seed)
    sys.stdout.write(serialize_mdp(mdp))
    return 0


def cmd_syncword(args) -> int:
    mdp = _load_mdp(args.mdp)
    try:
        word = shortest_sync_word(mdp)
    except NotDeterministic:
        print("not deterministic")
        return 2
    if word is None:
        print("none")
        return 1
    print(" ".join(mdp.actions[a] for a in word))
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="syncmdp", description=__doc__)
    parser.add_argument("--version", action="version", version=f"syncmdp {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check an MDP document")
    p.add_argument("mdp")
    p.set_defaults(fn=cmd_validate)

    def add_decide_args(p) -> None:
        p.add_argument("mdp")
        p.add_argument("--mode", choices=[BLIND, PERFECT], required=True)
        p.add_argument("--objective", choices=["strong", "weak"], required=True)
        p.add_argument("--algorithm", choices=["relation", "bounded"], default="relation")
        p.add_argument("--bound", type=int, default=12)
        p.add_argument("--max-nodes", type=int, default=DecideConfig().max_nodes_per_anchor)

    p = sub.add_parser("decide", help="decide strategy existence, report a witness")
    add_decide_args(p)
    p.add_argument("--out", help="also write the report to this file")
    p.add_argument("--no-simulate", action="store_true", help="skip the empirical check")
    p.set_defaults(fn=cmd_decide)

    p = sub.add_parser("synthesize", help="decide and write the witness strategy")
    add_decide_args(p)
    p.add_argument("--strategy-out", required=True)
    p.set_defaults(fn=cmd_synthesize)

    p = sub.add_parser("simulate", help="propagate distributions under a strategy")
    p.add_argument("mdp")
    p.add_argument("--strategy", required=True)
    p.add_argument("--steps", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--window", type=int)
    p.add_argument("--trace-out")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("oracle", help="cross-check oracles")
    oracle_sub = p.add_subparsers(dest="oracle", required=True)
    p = oracle_sub.add_parser("delta", help="family of a cycle via both algorithms")
    p.add_argument("mdp")
    p.add_argument("--cycle", required=True, help="cycle JSON, or @file")
    p.set_defaults(fn=cmd_oracle_delta)

    p = sub.add_parser("gen", help="generate MDP documents")
    gen_sub = p.add_subparsers(dest="generator", required=True)
    g = gen_sub.add_parser("cerny", help="rotate-or-merge automaton")
    g.add_argument("-n", type=int, required=True)
    g.set_defaults(fn=cmd_gen)
    g = gen_sub.add_parser("random", help="seeded random MDP")
    g.add_argument("--states", type=int, required=True)
    g.add_argument("--actions", type=int, required=True)
    g.add_argument("--branching", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.set_defaults(fn=cmd_gen)

    p = sub.add_parser("syncword", help="shortest reset word of a deterministic MDP")
    p.add_argument("mdp")
    p.set_defaults(fn=cmd_syncword)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
