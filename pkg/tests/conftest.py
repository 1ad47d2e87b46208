from __future__ import annotations

from pathlib import Path

import pytest

from syncmdp import Mdp, parse_mdp

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def load_fixture(name: str) -> Mdp:
    return parse_mdp((FIXTURES / name).read_text())


@pytest.fixture(scope="session")
def branch_or_stay() -> Mdp:
    return load_fixture("branch_or_stay.json")


@pytest.fixture(scope="session")
def two_absorbing() -> Mdp:
    return load_fixture("two_absorbing.json")


@pytest.fixture(scope="session")
def ring_funnel() -> Mdp:
    return load_fixture("ring_funnel.json")


@pytest.fixture(scope="session")
def split_merge_loop() -> Mdp:
    return load_fixture("split_merge_loop.json")


@pytest.fixture(scope="session")
def memory_needed() -> Mdp:
    return load_fixture("memory_needed.json")


@pytest.fixture(scope="session")
def twin_threads() -> Mdp:
    return load_fixture("twin_threads.json")
