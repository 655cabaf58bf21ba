"""
Тесты сервиса проверок: точность, корректность на семействах, трудные слова, таблицы
"""
import pandas as pd
import pytest

from parity_complement.models.schemas import HardWordReport
from parity_complement.services.verification_service import (
    KNOWN_PHASE2_DEVIATIONS, _phase2_run, exhaustive_single_state_family, phase2_deviations,
    random_parity_automata, render_text, reports_frame, tightness_report, tightness_table,
    verification_service,
)


@pytest.mark.parametrize("n, max_priority, counts, ratio", [
    (1, 2, (2, 1, 1, 1), 3.0),
    (1, 3, (2, 2, 2, 2), 2.0),
])
def test_tightness_golden(n, max_priority, counts, ratio):
    report = tightness_report(n, max_priority)
    assert (report.subsets, report.mfts, report.fnhts, report.full_fnhts) == counts
    assert report.ratio == pytest.approx(ratio)
    assert report.bound == 4 * n + 1
    assert report.passed


def test_tightness_two_states():
    report = tightness_report(2, 2)
    assert (report.fnhts, report.full_fnhts) == (9, 7)
    assert report.passed


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("max_priority", [2, 3, 4])
def test_tightness_cells_pass(n, max_priority):
    report = tightness_report(n, max_priority)
    assert report.violations == []
    assert report.mfts <= 2 * report.full_marking_mfts
    assert report.fnhts <= 2 * report.full_fnhts


@pytest.mark.slow
def test_tightness_three_states():
    assert tightness_report(3, 2).passed


def test_exhaustive_single_state_family_passes():
    family = exhaustive_single_state_family()
    assert len(family) == 12
    reports = verification_service.check_family(family, prefix_bound=2, period_bound=3)
    assert len(reports) == 12
    for report in reports:
        assert report.passed, report.counterexamples


def test_random_family_is_reproducible():
    first = random_parity_automata(count=5, seed=7)
    second = random_parity_automata(count=5, seed=7)
    assert first == second
    for p in first:
        assert len(p.states) <= 3
        assert max(p.priority_set) >= 2


def test_random_family_passes():
    reports = verification_service.check_family(random_parity_automata(count=10), prefix_bound=1, period_bound=2)
    assert reports
    assert all(report.passed for report in reports)


@pytest.mark.slow
def test_random_family_passes_thoroughly():
    reports = verification_service.check_family(random_parity_automata())
    assert all(report.passed for report in reports)


def test_phase2_run_on_single_loops(loop1, loop2, m0):
    assert _phase2_run(loop1, m0, ("a", "a")) == (True, "periodic", None)
    assert _phase2_run(loop2, m0, ("a", "a")) == (False, "none", 1)


@pytest.mark.parametrize("h", [None, 2, 3])
@pytest.mark.parametrize("priorities", [(1, 2), (1, 2, 3)])
def test_hard_words_single_state(priorities, h):
    reports = verification_service.hard_word_suite(1, priorities, h)
    assert reports
    for report in reports:
        assert report.rejected_by_parity
        assert report.accepted_by_complement
        assert report.transfer_reaches_tree
        assert report.fixpoint
        assert report.acceptance == "periodic"
        assert report.blocked_at is None


@pytest.mark.parametrize("h", [None, 2, 3])
@pytest.mark.parametrize("priorities", [(1, 2), (1, 2, 3)])
def test_hard_words_two_states(priorities, h):
    reports = verification_service.hard_word_suite(2, priorities, h)
    assert [report.tree_index for report in reports] == list(range(len(reports)))
    for report in reports:
        assert report.rejected_by_parity
        assert report.accepted_by_complement
        assert report.blocked_at is None
    assert phase2_deviations(reports) == KNOWN_PHASE2_DEVIATIONS[(2, priorities)]
    assert verification_service.hard_word_errors(2, priorities, reports) == []


@pytest.mark.parametrize("h", [None, 2, 3])
def test_shrinking_trees_two_states(h):
    reports = verification_service.hard_word_suite(2, (1, 2), h)
    for report in reports[:2]:
        assert not report.transfer_reaches_tree
        assert not report.fixpoint


def _report(index, fixpoint=True, acceptance="periodic", rejected=True, accepted=True):
    return HardWordReport(
        tree_index=index, h=2, rejected_by_parity=rejected, accepted_by_complement=accepted,
        transfer_reaches_tree=True, fixpoint=fixpoint, acceptance=acceptance,
    )


def test_hard_word_errors_single_state_allows_no_deviation():
    assert verification_service.hard_word_errors(1, (1, 2), [_report(0), _report(1)]) == []
    errors = verification_service.hard_word_errors(1, (1, 2), [_report(0, acceptance="per_period")])
    assert len(errors) == 1
    assert "неожиданное" in errors[0]


def test_hard_word_errors_requires_known_deviations():
    known = [_report(3, acceptance="none"), _report(4, acceptance="none")]
    assert verification_service.hard_word_errors(2, (1, 2, 3), known) == []
    errors = verification_service.hard_word_errors(2, (1, 2, 3), known[:1])
    assert errors == ["известное отклонение второй фазы не воспроизведено (4, True, 'none')"]


def test_hard_word_errors_zero_tolerance_clauses():
    reports = [_report(0, rejected=False), _report(1, accepted=False)]
    errors = verification_service.hard_word_errors(1, (1, 2, 3), reports)
    assert len(errors) == 2
    assert errors[0].startswith("дерево #0")


def test_hard_word_suite_with_explicit_period():
    reports = verification_service.hard_word_suite(1, (1, 2, 3), h=4)
    assert {report.h for report in reports} == {4}


def test_tightness_table():
    df = tightness_table([tightness_report(1, 2), tightness_report(1, 3)])
    assert list(df["upper_bound_states"]) == [3, 4]
    assert list(df["ratio"]) == [3.0, 2.0]
    assert list(df["violations"]) == [0, 0]
    assert df["passed"].all()
    text = render_text(df)
    assert "upper_bound_states" in text
    assert "3.0" in text


def test_reports_frame_flattens_lists():
    report = verification_service.complement_correctness_check(exhaustive_single_state_family()[0], 1, 1)
    df = reports_frame([report])
    assert df.loc[0, "priorities"] == "1,2"
    assert df.loc[0, "counterexamples"] == 0
    assert bool(df.loc[0, "passed"])


def test_render_empty_table():
    assert render_text(pd.DataFrame()) == "(no rows)"


@pytest.mark.parametrize("n, max_priority", [(1, 3), (2, 2), (2, 4)])
def test_injection_check(n, max_priority):
    assert verification_service.injection_check(n, max_priority) == []
