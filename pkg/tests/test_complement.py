"""
Тесты конструкции дополнения: функции переходов, шаги фаз, явный автомат
"""
import pytest

from parity_complement.models.automata import PriorityError, normalize
from parity_complement.models.fnht import MFT, validate_mft
from parity_complement.services.complement_service import (
    BLOCKED, Phase1, Phase2, build_complement, delta, delta_i, mft_step,
    phase_counts, subset_step, successors, transfer_targets,
)
from parity_complement.services.fnht_service import CapExceededError, fnht_service
from parity_complement.services.oracle_service import buchi_emptiness
from parity_complement.services.verification_service import random_parity_automata
from tests.conftest import single_loop

A, B = 0b01, 0b10


def test_delta(p2):
    assert delta(p2, A, "s") == A | B
    assert delta(p2, 0, "s") == 0
    assert delta(p2, A | B, "s") == A | B


def test_delta_i(p2):
    assert delta_i(p2, A, "s", 2) == B
    assert delta_i(p2, B, "s", 1) == 0
    assert delta_i(p2, A | B, "s", 3) == A | B
    assert delta_i(p2, A, "s", -1) == 0


def test_subset_step(loop1, p2):
    outcome = subset_step(loop1, 0b1, "a")
    assert outcome.successor == Phase1(0b1) and not outcome.accepting
    empty = subset_step(loop1, 0, "a")
    assert empty.successor == Phase1(0) and empty.accepting
    assert subset_step(p2, A, "s").successor == Phase1(A | B)


def test_transfer_targets(loop1, m0, root_leaf_mft):
    assert transfer_targets(loop1, 0b1, "a") == (m0,)
    assert transfer_targets(loop1, 0, "a") == ()
    wide = single_loop(1, priorities=(1, 2, 3))
    assert set(transfer_targets(wide, 0b1, "a")) == {m0, root_leaf_mft}


def test_transfer_targets_need_even_priority():
    with pytest.raises(PriorityError):
        transfer_targets(single_loop(1, priorities=(0, 1)), 0b1, "a")


# Четыре эталонных шага второй фазы
def test_mft_step_blocks_on_priority_two(m0):
    assert mft_step(single_loop(2), m0, "a") is BLOCKED


def test_mft_step_accepts_on_priority_one(m0):
    outcome = mft_step(single_loop(1), m0, "a")
    assert outcome.successor == Phase2(m0)
    assert outcome.accepting


def test_root_leaf_keeps_marking_on_priority_two(root_leaf_mft):
    outcome = mft_step(single_loop(2, priorities=(1, 2, 3)), root_leaf_mft, "a")
    assert outcome.successor == Phase2(root_leaf_mft)
    assert not outcome.accepting


def test_root_leaf_accepts_on_priority_three(root_leaf_mft):
    outcome = mft_step(single_loop(3, priorities=(1, 2, 3)), root_leaf_mft, "a")
    assert outcome.successor == Phase2(root_leaf_mft)
    assert outcome.accepting


def test_blocked_outcome_has_no_successor():
    assert BLOCKED.blocked
    assert BLOCKED.successor is None


@pytest.mark.parametrize("seed", [3, 11])
def test_phase2_steps_preserve_tree_and_validity(seed):
    for p in random_parity_automata(count=6, seed=seed):
        if len(p.states) > 2:
            continue
        for m in fnht_service.enumerate_mfts(p.all_states, p.max_priority):
            for letter in p.alphabet:
                outcome = mft_step(p, m, letter)
                if outcome.blocked:
                    continue
                successor: MFT = outcome.successor.mft
                assert successor.base.paths == m.base.paths
                assert validate_mft(successor, p.all_states, p.max_priority) == []
                for i in range(len(m.base)):
                    assert successor.base.states[i] & ~delta(p, m.base.states[i], letter) == 0


def test_build_complement_loop1(loop1, m0):
    c = build_complement(loop1)
    assert len(c.states) == 2
    assert c.states[0] == "S:{q}"
    assert c.states[1].startswith("M:")
    assert phase_counts(c) == (1, 1)
    assert (1, 0, 1, True) in c.transitions
    assert not buchi_emptiness(c).empty


def test_build_complement_loop2_is_empty(loop2):
    assert buchi_emptiness(build_complement(loop2)).empty


def test_build_complement_is_deterministic_per_phase(p2):
    p = normalize(p2)
    c = build_complement(p)
    for source in range(len(c.states)):
        for letter in range(len(c.alphabet)):
            targets = [t for s, a, t, _ in c.transitions if s == source and a == letter]
            phase1_targets = [t for t in targets if c.states[t].startswith("S:")]
            phase2_targets = [t for t in targets if c.states[t].startswith("M:")]
            assert len(phase1_targets) <= 1
            if c.states[source].startswith("M:"):
                assert len(phase2_targets) <= 1 and not phase1_targets
            else:
                assert len(phase1_targets) == 1
    for s, a, t, accepting in c.transitions:
        if c.states[s].startswith("S:") and c.states[t].startswith("M:"):
            assert not accepting
        if c.states[s].startswith("S:") and c.states[t].startswith("S:"):
            assert accepting == (c.states[s] == "S:{}")


def test_successors_of_phase1_include_transfers(loop1, m0):
    assert successors(loop1, Phase1(0b1), 0) == [(Phase1(0b1), False), (Phase2(m0), False)]


def test_build_complement_cap(p2):
    with pytest.raises(CapExceededError):
        build_complement(normalize(p2), cap=2)
