#!/usr/bin/env python3
"""
Приемочный прогон Parity Complement

Проверяет:
- Корректность дополнения на исчерпывающем и случайном семействах
- Неравенства точности по ячейкам (n, π)
- Инъекции для |Q| ≤ 3, π ≤ 4
- Трудные слова полных FNHT
- Эталонные шаги второй фазы
- Согласие parity_to_buchi с оракулом принадлежности
- Эталонные числа перечисления и сверку с перебором

Код выхода 0 только если все критерии выполнены.
"""

import argparse
import sys
import time
from pathlib import Path

# Добавляем корневую директорию в путь для импорта
root_dir = Path(__file__).parent.parent
sys.path.insert(0, str(root_dir))

from loguru import logger

from parity_complement.config import settings
from parity_complement.main import setup_logging
from parity_complement.models.automata import LassoWord, ParityAutomaton
from parity_complement.models.fnht import FNHT, MFT, Marker, MarkerKind
from parity_complement.services.complement_service import BLOCKED, Phase2, StepOutcome, mft_step
from parity_complement.services.fnht_service import canonical_key, fnht_service
from parity_complement.services.oracle_service import (
    buchi_lasso_member, parity_lasso_member, parity_to_buchi,
)
from parity_complement.services.verification_service import (
    exhaustive_single_state_family, phase2_deviations, random_parity_automata,
    render_text, tightness_table, verification_service,
)
from parity_complement.utils.helpers import bounded_lassos
from tests.oracles import brute_force_fnhts

TIGHTNESS_CELLS = [(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 2)]


def print_section(title: str):
    """Печатает заголовок секции"""
    print(f"\n{'='*50}")
    print(f"🔍 {title}")
    print('='*50)


def print_success(message: str):
    print(f"✅ {message}")


def print_error(message: str):
    print(f"❌ {message}")


def print_warning(message: str):
    print(f"⚠️  {message}")


def check_correctness(random_count: int) -> bool:
    print_section("1. Корректность дополнения")
    exhaustive = verification_service.check_family(exhaustive_single_state_family(), 2, 3)
    randomized = verification_service.check_family(random_parity_automata(random_count), 2, 3)
    failed = [r for r in exhaustive + randomized if not r.passed]
    print(f"   исчерпывающее семейство: {len(exhaustive)}, случайное: {len(randomized)} (seed={settings.fuzz_seed})")
    if failed:
        for report in failed:
            print_error(f"n={report.states}, Π={report.priorities}: {len(report.counterexamples)} контрпримеров")
        return False
    print_success("все автоматы прошли проверку")
    return True


def check_tightness() -> bool:
    print_section("2. Точность")
    reports = [verification_service.tightness_report(n, pi) for n, pi in TIGHTNESS_CELLS]
    print(render_text(tightness_table(reports)))
    for report in reports:
        for violation in report.violations:
            print_error(f"(n={report.n}, π={report.max_priority}): {violation}")
    return all(report.passed for report in reports)


def check_injections() -> bool:
    print_section("3. Инъекции")
    ok = True
    for n in (1, 2, 3):
        for pi in (2, 3, 4):
            violations = verification_service.injection_check(n, pi)
            if violations:
                ok = False
                print_error(f"(n={n}, π={pi}): {violations[0]} (+{len(violations) - 1})")
            else:
                print_success(f"(n={n}, π={pi})")
    return ok


def check_hard_words() -> bool:
    print_section("4. Трудные слова")
    ok = True
    for n in (1, 2):
        for priorities in ((1, 2), (1, 2, 3)):
            for h in (None, 2, 3):
                reports = verification_service.hard_word_suite(n, priorities, h)
                errors = verification_service.hard_word_errors(n, priorities, reports)
                deviations = phase2_deviations(reports)
                label = f"n={n}, Π={list(priorities)}, h={h or 'default'}"
                if errors:
                    ok = False
                    for error in errors:
                        print_error(f"{label}: {error}")
                elif deviations:
                    print_warning(
                        f"{label}: {len(reports)} деревьев, известные отклонения второй фазы: "
                        f"{sorted(deviations)}"
                    )
                else:
                    print_success(f"{label}: {len(reports)} деревьев")
    return ok


def _loop(priority: int, priorities) -> ParityAutomaton:
    return ParityAutomaton.build(["q"], ["a"], ["q"], [("q", "a", "q", priority)], priorities=priorities)


def check_micro_traces() -> bool:
    print_section("5. Эталонные шаги")
    t0 = FNHT.from_labels({(): (1, 0, 0), (0,): (1, 1, 0)}, 2)
    m0 = MFT(t0, Marker((0,), MarkerKind.PURE), 1)
    root_leaf = MFT(FNHT.from_labels({(): (1, 0, 1)}, 2), Marker((), MarkerKind.RECURRENT), 1)
    cases = [
        ("m0, приоритет 2", mft_step(_loop(2, (1, 2)), m0, "a") is BLOCKED),
        ("m0, приоритет 1", mft_step(_loop(1, (1, 2)), m0, "a") == StepOutcome(Phase2(m0), True)),
        ("root-leaf, приоритет 2", mft_step(_loop(2, (1, 2, 3)), root_leaf, "a") == StepOutcome(Phase2(root_leaf), False)),
        ("root-leaf, приоритет 3", mft_step(_loop(3, (1, 2, 3)), root_leaf, "a") == StepOutcome(Phase2(root_leaf), True)),
    ]
    for name, passed in cases:
        (print_success if passed else print_error)(name)
    return all(passed for _, passed in cases)


def check_oracle_agreement() -> bool:
    print_section("6. Согласие оракулов")
    disagreements = 0
    family = random_parity_automata(100)
    for p in family:
        b = parity_to_buchi(p)
        for prefix, period in bounded_lassos(p.alphabet, 2, 3):
            word = LassoWord(prefix, period)
            if buchi_lasso_member(b, word) != parity_lasso_member(p, word):
                disagreements += 1
                logger.warning(f"Расхождение на {word}")
    if disagreements:
        print_error(f"расхождений: {disagreements}")
        return False
    print_success(f"{len(family)} автоматов, расхождений нет")
    return True


def check_enumeration() -> bool:
    print_section("7. Перечисление")
    golden = {
        "|fnht({q},2)|": (len(fnht_service.enumerate_fnhts(1, 2)), 1),
        "|fnht({q},3)|": (len(fnht_service.enumerate_fnhts(1, 3)), 2),
        "|mft({q},2)|": (len(fnht_service.enumerate_mfts(1, 2)), 1),
        "|mft({q},3)|": (len(fnht_service.enumerate_mfts(1, 3)), 2),
    }
    ok = True
    for name, (actual, expected) in golden.items():
        if actual == expected:
            print_success(f"{name} = {actual}")
        else:
            ok = False
            print_error(f"{name} = {actual}, ожидалось {expected}")
    for n in (1, 2):
        for pi in (2, 3, 4):
            universe = (1 << n) - 1
            produced = {canonical_key(t) for t in fnht_service.enumerate_fnhts(universe, pi)}
            expected = {canonical_key(t) for t in brute_force_fnhts(universe, pi)}
            if produced != expected:
                ok = False
                print_error(f"(n={n}, π={pi}): перечисление расходится с перебором")
    if ok:
        print_success("перечисление совпадает с перебором для |Q| ≤ 2, π ≤ 4")
    return ok


def main() -> int:
    parser = argparse.ArgumentParser(description="Приемочный прогон Parity Complement")
    parser.add_argument("--random-count", type=int, default=settings.random_automata_count)
    parser.add_argument("--log-level", default="WARNING")
    args = parser.parse_args()
    setup_logging(args.log_level)

    print("🧮 Parity Complement - Приемочный прогон")
    print(f"📁 Рабочая директория: {root_dir}")
    started = time.monotonic()
    results = {
        "correctness": check_correctness(args.random_count),
        "tightness": check_tightness(),
        "injections": check_injections(),
        "hard words": check_hard_words(),
        "micro traces": check_micro_traces(),
        "oracle agreement": check_oracle_agreement(),
        "enumeration": check_enumeration(),
    }

    print_section("Итоговая сводка")
    for name, passed in results.items():
        (print_success if passed else print_error)(name)
    print(f"\n⏱️  {time.monotonic() - started:.1f} с")
    return 0 if all(results.values()) else 1


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n\n⏹️  Прогон прерван пользователем")
        sys.exit(130)
