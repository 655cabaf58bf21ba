"""
Общие фикстуры: маленькие автоматы и деревья, профили hypothesis
"""
import os

os.environ.setdefault("LOG_FILE", "")

import hypothesis
import pytest

from parity_complement.models.automata import ParityAutomaton
from parity_complement.models.fnht import FNHT, MFT, Marker, MarkerKind

hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=8, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=400, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


def single_loop(priority: int, priorities=(1, 2)) -> ParityAutomaton:
    """Одно состояние q, одна буква a, петля с заданным приоритетом"""
    return ParityAutomaton.build(["q"], ["a"], ["q"], [("q", "a", "q", priority)], priorities=priorities)


@pytest.fixture
def loop1() -> ParityAutomaton:
    return single_loop(1)


@pytest.fixture
def loop2() -> ParityAutomaton:
    return single_loop(2)


@pytest.fixture
def p2() -> ParityAutomaton:
    return ParityAutomaton.build(
        ["a", "b"], ["s"], ["a"],
        [("a", "s", "a", 1), ("a", "s", "b", 2), ("b", "s", "b", 3)],
    )


@pytest.fixture
def t0() -> FNHT:
    return FNHT.from_labels({(): (0b1, 0, 0), (0,): (0b1, 0b1, 0)}, 2)


@pytest.fixture
def root_leaf() -> FNHT:
    return FNHT.from_labels({(): (0b1, 0, 0b1)}, 2)


@pytest.fixture
def m0(t0) -> MFT:
    return MFT(t0, Marker((0,), MarkerKind.PURE), 0b1)


@pytest.fixture
def root_leaf_mft(root_leaf) -> MFT:
    return MFT(root_leaf, Marker((), MarkerKind.RECURRENT), 0b1)
