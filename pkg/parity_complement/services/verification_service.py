"""
Сервис проверок: корректность дополнения, оценки точности, трудные слова,
семейства автоматов для перебора
"""
import itertools
import random
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple
import pandas as pd
from loguru import logger
from pydantic import BaseModel

from parity_complement.config import settings
from parity_complement.models.automata import (
    LassoWord, ParityAutomaton, PriorityError, max_even_priority, normalize,
)
from parity_complement.models.fnht import (
    FNHT, MFT, first_marker, is_full_marking, marker_candidates, validate_fnht, validate_mft,
)
from parity_complement.models.schemas import (
    Counterexample, CorrectnessReport, HardWordReport, TightnessReport,
)
from parity_complement.services.complement_service import (
    build_complement, delta, mft_step, phase_counts,
)
from parity_complement.services.fnht_service import (
    canonical_key, fnht_service, inject_nonfull_fnht, inject_nonfull_mft,
)
from parity_complement.services.hardness_service import (
    FullAutomaton, full_parity_automaton, hard_word,
)
from parity_complement.services.oracle_service import (
    buchi_emptiness, buchi_lasso_member, complement_lasso_member,
    intersect_buchi, parity_lasso_member, parity_to_buchi,
)
from parity_complement.utils.helpers import bounded_lassos, full_mask

# Известные отклонения второй фазы трудных слов при фиксированном порядке
# маркеров: (n, Π) -> {(номер полного дерева, fixpoint, acceptance)}.
# Для n = 2, Π = {1,2} деревья #0 и #1 имеют корень с l_r из одного состояния:
# при π_e + 1 ∉ Π β_t не дает переходов в рекуррентное состояние корня,
# δ(Q, β_t) ≠ Q, и дерево на β сжимается. В деревьях #2, #3 (Π = {1,2}) и
# #3, #4 (Π = {1,2,3}) r-маркер узла 0 стоит на петле приоритета 1 под β_t и γ_t,
# δ_{l_l-1} сохраняет его, и прогон не принимает ни разу. Любое другое
# отклонение, как и отсутствие перечисленного, считается ошибкой.
KNOWN_PHASE2_DEVIATIONS: Dict[Tuple[int, Tuple[int, ...]], FrozenSet[Tuple[int, bool, str]]] = {
    (2, (1, 2)): frozenset({
        (0, False, "periodic"),
        (1, False, "periodic"),
        (2, True, "none"),
        (3, True, "none"),
    }),
    (2, (1, 2, 3)): frozenset({
        (3, True, "none"),
        (4, True, "none"),
    }),
}


def known_phase2_deviations(n: int, priorities: Iterable[int]) -> FrozenSet[Tuple[int, bool, str]]:
    return KNOWN_PHASE2_DEVIATIONS.get((n, tuple(sorted(set(priorities)))), frozenset())


def phase2_deviations(reports: Iterable[HardWordReport]) -> FrozenSet[Tuple[int, bool, str]]:
    """Отклонения второй фазы в виде (номер дерева, fixpoint, acceptance)"""
    return frozenset(
        (r.tree_index, r.fixpoint, r.acceptance)
        for r in reports
        if not r.fixpoint or r.acceptance != "periodic"
    )


class VerificationService:
    """Сервис исполнимых проверок конструкции"""

    def __init__(self):
        self.prefix_bound = settings.correctness_prefix_bound
        self.period_bound = settings.correctness_period_bound
        self.enumeration_cap = settings.enumeration_cap

    # ==============================================
    # КОРРЕКТНОСТЬ
    # ==============================================

    def complement_correctness_check(
        self,
        p: ParityAutomaton,
        prefix_bound: Optional[int] = None,
        period_bound: Optional[int] = None,
    ) -> CorrectnessReport:
        """
        Проверяет, что дополнение распознает ровно дополнение языка

        (a) Пустота произведения parity_to_buchi(P) × C.
        (b) Для каждого лассо в пределах границ ровно один из P и C принимает.

        Args:
            p: Нормализованный автомат четности с π_e ≥ 2
            prefix_bound: Максимальная длина префикса
            period_bound: Максимальная длина периода

        Returns:
            Отчет с контрпримерами
        """
        prefix_bound = self.prefix_bound if prefix_bound is None else prefix_bound
        period_bound = self.period_bound if period_bound is None else period_bound

        complement = build_complement(p)
        phase1, phase2 = phase_counts(complement)
        counterexamples: List[Counterexample] = []

        witness = buchi_emptiness(intersect_buchi(parity_to_buchi(p), complement))
        if not witness.empty:
            logger.warning(f"Произведение P × C непусто, свидетель {witness.lasso}")
            counterexamples.append(Counterexample(
                prefix=list(witness.lasso.prefix),
                period=list(witness.lasso.period),
                in_parity=True,
                in_complement=True,
            ))

        checked = 0
        for prefix, period in bounded_lassos(p.alphabet, prefix_bound, period_bound):
            word = LassoWord(prefix, period)
            in_parity = parity_lasso_member(p, word)
            in_complement = buchi_lasso_member(complement, word)
            checked += 1
            if in_parity == in_complement:
                logger.warning(f"Контрпример {word}: P={in_parity}, C={in_complement}")
                counterexamples.append(Counterexample(
                    prefix=list(prefix),
                    period=list(period),
                    in_parity=in_parity,
                    in_complement=in_complement,
                ))

        report = CorrectnessReport(
            states=len(p.states),
            letters=len(p.alphabet),
            priorities=sorted(p.priority_set),
            phase1_states=phase1,
            phase2_states=phase2,
            product_empty=witness.empty,
            words_checked=checked,
            counterexamples=counterexamples,
        )
        logger.info(
            f"Проверка корректности: n={report.states}, |Σ|={report.letters}, "
            f"слов={checked}, контрпримеров={len(counterexamples)}"
        )
        return report

    def check_family(
        self,
        automata: Iterable[ParityAutomaton],
        prefix_bound: Optional[int] = None,
        period_bound: Optional[int] = None,
    ) -> List[CorrectnessReport]:
        """Проверяет каждый автомат семейства; пропускает нарушающие π_e ≥ 2"""
        reports = []
        for p in automata:
            p = normalize(p)
            try:
                max_even_priority(p)
            except PriorityError as e:
                logger.warning(f"Автомат пропущен: {e}")
                continue
            reports.append(self.complement_correctness_check(p, prefix_bound, period_bound))
        return reports

    # ==============================================
    # ТОЧНОСТЬ
    # ==============================================

    def tightness_report(self, n: int, max_priority: int, cap: Optional[int] = None) -> TightnessReport:
        """
        Подсчеты для оценки точности: |2^Q| + |mft(Q,π)| против #полных FNHT

        Args:
            n: Число состояний
            max_priority: Максимальный приоритет π
            cap: Лимит перечисления

        Returns:
            Отчет; violations перечисляет нарушенные неравенства
        """
        cap = cap or self.enumeration_cap
        universe = full_mask(n)
        trees = fnht_service.enumerate_fnhts(universe, max_priority, cap=cap)
        mfts = fnht_service.enumerate_mfts(universe, max_priority, cap=cap)
        full_trees = sum(1 for t in trees if t.root_states == universe)
        full_marking = sum(1 for m in mfts if is_full_marking(m))
        subsets = 1 << n
        bound = 4 * n + 1
        ratio = (subsets + len(mfts)) / full_trees

        violations = []
        if ratio > bound:
            violations.append(f"ratio {ratio:.3f} exceeds {bound}")
        if len(mfts) > 2 * full_marking:
            violations.append(f"#MFT {len(mfts)} > 2·#full-marking {full_marking}")
        if full_marking > n * len(trees):
            violations.append(f"#full-marking {full_marking} > n·#FNHT {n * len(trees)}")
        if len(trees) > 2 * full_trees:
            violations.append(f"#FNHT {len(trees)} > 2·#full-FNHT {full_trees}")
        crowded = sum(1 for t in trees if len(marker_candidates(t)) > n)
        if crowded:
            violations.append(f"{crowded} trees have more than {n} markers")

        report = TightnessReport(
            n=n,
            max_priority=max_priority,
            subsets=subsets,
            mfts=len(mfts),
            fnhts=len(trees),
            full_fnhts=full_trees,
            full_marking_mfts=full_marking,
            ratio=ratio,
            bound=bound,
            violations=violations,
        )
        logger.info(
            f"Точность (n={n}, π={max_priority}): |2^Q|={subsets}, |mft|={len(mfts)}, "
            f"|fnht|={len(trees)}, полных={full_trees}, ratio={ratio:.3f} ≤ {bound}"
        )
        return report

    def injection_check(self, n: int, max_priority: int, cap: Optional[int] = None) -> List[str]:
        """
        Исчерпывающая проверка обеих инъекций на fnht(Q,π) и mft(Q,π)

        Args:
            n: Число состояний
            max_priority: Максимальный приоритет π
            cap: Лимит перечисления

        Returns:
            Список нарушений (пустой - обе инъекции тотальны, инъективны и попадают в полные цели)
        """
        cap = cap or self.enumeration_cap
        universe = full_mask(n)
        violations = []

        images = {}
        for t in fnht_service.enumerate_fnhts(universe, max_priority, cap=cap):
            if t.root_states == universe:
                continue
            image = inject_nonfull_fnht(t, universe)
            if validate_fnht(image, universe, max_priority) or image.root_states != universe:
                violations.append(f"tree injection leaves the full valid trees: {canonical_key(t)}")
            if image in images:
                violations.append(f"tree injection collides: {canonical_key(t)}")
            images[image] = t

        marked = {}
        for m in fnht_service.enumerate_mfts(universe, max_priority, cap=cap):
            if is_full_marking(m):
                continue
            image = inject_nonfull_mft(m)
            if validate_mft(image, universe, max_priority) or not is_full_marking(image):
                violations.append(f"marking injection leaves the full valid MFTs: {canonical_key(m.base)}")
            if image in marked:
                violations.append(f"marking injection collides: {canonical_key(m.base)}")
            marked[image] = m

        logger.info(
            f"Инъекции (n={n}, π={max_priority}): {len(images)} деревьев, "
            f"{len(marked)} MFT, нарушений {len(violations)}"
        )
        return violations

    # ==============================================
    # ТРУДНЫЕ СЛОВА
    # ==============================================

    def hard_word_report(
        self, registry: FullAutomaton, t: FNHT, tree_index: int, h: Optional[int] = None
    ) -> HardWordReport:
        """
        Проверяет трудное слово α^t полного FNHT t

        Args:
            registry: Полный автомат P_n^Π
            t: Полное FNHT
            tree_index: Номер t среди полных FNHT в каноническом порядке
            h: Длина периода (None - значение по умолчанию)

        Returns:
            Отчет о непринятии P, принятии дополнением и поведении второй фазы
        """
        word, beta, _ = hard_word(t, h, registry)
        period = word.period
        size = len(period)
        p = registry.automaton()
        rejected = not parity_lasso_member(p, word)
        accepted = complement_lasso_member(p, word)
        universe = p.all_states
        reaches = delta(p, universe, beta) == universe

        marker, full_set = first_marker(t)
        fixpoint, acceptance, blocked_at = _phase2_run(p, MFT(t, marker, full_set), period)

        report = HardWordReport(
            tree_index=tree_index,
            h=size,
            rejected_by_parity=rejected,
            accepted_by_complement=accepted,
            transfer_reaches_tree=reaches,
            fixpoint=fixpoint,
            acceptance=acceptance,
            blocked_at=blocked_at,
        )
        if not fixpoint or acceptance != "periodic":
            known = (tree_index, fixpoint, acceptance) in known_phase2_deviations(registry.n, registry.priorities)
            label = "Известное отклонение" if known else "Отклонение"
            (logger.debug if known else logger.warning)(
                f"{label} для дерева #{tree_index} (h={size}): "
                f"transfer={reaches}, fixpoint={fixpoint}, acceptance={acceptance}, blocked_at={blocked_at}"
            )
        return report

    def hard_word_suite(
        self, n: int, priorities: Sequence[int], h: Optional[int] = None
    ) -> List[HardWordReport]:
        """Отчеты трудных слов для всех полных FNHT над n состояниями"""
        registry = full_parity_automaton(n, priorities)
        trees = fnht_service.enumerate_fnhts(full_mask(n), max(priorities), full_only=True)
        reports = [self.hard_word_report(registry, t, index, h) for index, t in enumerate(trees)]
        logger.info(
            f"Трудные слова n={n}, Π={sorted(priorities)}: {len(reports)} деревьев, "
            f"отклонено P: {sum(r.rejected_by_parity for r in reports)}, "
            f"неподвижных: {sum(r.fixpoint for r in reports)}"
        )
        return reports

    def hard_word_errors(
        self, n: int, priorities: Sequence[int], reports: Sequence[HardWordReport]
    ) -> List[str]:
        """
        Нарушения для набора отчетов трудных слов

        Непринятие P и принятие дополнением обязательны для каждого дерева.
        Отклонения второй фазы должны в точности совпасть с известными.

        Returns:
            Список описаний нарушений (пустой, если нарушений нет)
        """
        errors = [
            f"дерево #{r.tree_index}: rejected_by_parity={r.rejected_by_parity}, "
            f"accepted_by_complement={r.accepted_by_complement}"
            for r in reports
            if not r.rejected_by_parity or not r.accepted_by_complement
        ]
        observed = phase2_deviations(reports)
        expected = known_phase2_deviations(n, priorities)
        errors.extend(f"неожиданное отклонение второй фазы {d}" for d in sorted(observed - expected))
        errors.extend(f"известное отклонение второй фазы не воспроизведено {d}" for d in sorted(expected - observed))
        if errors:
            logger.error(f"Трудные слова n={n}, Π={sorted(priorities)}: нарушений {len(errors)}")
        return errors


def _phase2_run(p: ParityAutomaton, start: MFT, period: Sequence[str]):
    """
    Детерминированный прогон второй фазы по α^t после перехода на позиции 0

    Returns:
        (дерево не менялось и блокировки нет, вид приемки, позиция блокировки)
    """
    h = len(period)
    current = start
    seen: Dict[tuple, int] = {}
    flags: Dict[int, bool] = {}
    same_tree = True
    position = 1
    while (position % h, current) not in seen:
        seen[(position % h, current)] = position
        outcome = mft_step(p, current, period[position % h])
        if outcome.blocked:
            return False, "none", position
        flags[position] = outcome.accepting
        current = outcome.successor.mft
        same_tree = same_tree and current.base == start.base
        position += 1

    loop_start = seen[(position % h, current)]
    loop_length = position - loop_start

    def accepting_at(k: int) -> bool:
        if k < position:
            return flags[k]
        return flags[loop_start + (k - loop_start) % loop_length]

    horizon = position + loop_length + h
    periodic = all(accepting_at(k) for k in range(h, horizon + 1, h))
    per_period = all(
        any(accepting_at(k) for k in range(block * h + 1, (block + 1) * h + 1))
        for block in range(horizon // h + 1)
    )
    acceptance = "periodic" if periodic else "per_period" if per_period else "none"
    return same_tree, acceptance, None


# ==============================================
# СЕМЕЙСТВА АВТОМАТОВ
# ==============================================

def exhaustive_single_state_family(max_letters: int = 2) -> List[ParityAutomaton]:
    """
    Все автоматы с одним состоянием, до max_letters букв и Π = {1,2}

    На каждую букву: петли нет, петля с приоритетом 1 или 2.
    """
    family = []
    for letters in range(1, max_letters + 1):
        alphabet = [chr(ord("a") + k) for k in range(letters)]
        for choice in itertools.product((None, 1, 2), repeat=letters):
            transitions = [
                ("q", letter, "q", priority)
                for letter, priority in zip(alphabet, choice) if priority is not None
            ]
            family.append(ParityAutomaton.build(["q"], alphabet, ["q"], transitions, priorities=(1, 2)))
    return family


def random_parity_automata(count: Optional[int] = None, seed: Optional[int] = None) -> List[ParityAutomaton]:
    """
    Псевдослучайные автоматы: n ≤ 3, |Σ| ≤ 2, Π ⊆ {1,2,3,4}, нормализованные, π_e ≥ 2

    Args:
        count: Размер семейства
        seed: Зерно генератора (логируется)

    Returns:
        Список автоматов; воспроизводим при том же зерне
    """
    count = settings.random_automata_count if count is None else count
    seed = settings.fuzz_seed if seed is None else seed
    logger.info(f"Случайное семейство: {count} автоматов, seed={seed}")
    rng = random.Random(seed)
    family = []
    skipped = 0
    while len(family) < count:
        n = rng.randint(1, 3)
        letters = rng.randint(1, 2)
        states = [f"q{i}" for i in range(n)]
        alphabet = [chr(ord("a") + k) for k in range(letters)]
        palette = [priority for priority in (1, 2, 3, 4) if rng.random() < 0.6] or [2]
        transitions = [
            (source, letter, target, rng.choice(palette))
            for source in states for letter in alphabet for target in states
            if rng.random() < 0.45
        ]
        initial = [q for q in states if rng.random() < 0.5] or [states[0]]
        p = normalize(ParityAutomaton.build(states, alphabet, initial, transitions, priorities=palette))
        try:
            max_even_priority(p)
        except PriorityError:
            skipped += 1
            continue
        family.append(p)
    if skipped:
        logger.debug(f"Пропущено автоматов с π_e < 2: {skipped}")
    return family


# ==============================================
# ОТЧЕТЫ
# ==============================================

def reports_frame(reports: Sequence[BaseModel]) -> pd.DataFrame:
    """Таблица отчетов; списки заменяются числом элементов"""
    rows = []
    for report in reports:
        row = report.model_dump()
        for key, value in list(row.items()):
            if key in ("counterexamples", "violations"):
                row[key] = len(value)
            elif isinstance(value, list):
                row[key] = ",".join(str(item) for item in value)
        if hasattr(report, "passed"):
            row["passed"] = report.passed
        rows.append(row)
    return pd.DataFrame(rows)


def tightness_table(reports: Sequence[TightnessReport]) -> pd.DataFrame:
    """Сводная таблица точности с оценкой сверху |2^Q| + |mft|"""
    df = reports_frame(reports)
    if not df.empty:
        df["upper_bound_states"] = [report.upper_bound_states for report in reports]
        df["ratio"] = df["ratio"].round(3)
    return df


def render_text(df: pd.DataFrame) -> str:
    """Выровненные колонки для вывода в консоль"""
    if df.empty:
        return "(no rows)"
    return df.to_string(index=False)


# Глобальный экземпляр сервиса
verification_service = VerificationService()


def complement_correctness_check(
    p: ParityAutomaton, prefix_bound: Optional[int] = None, period_bound: Optional[int] = None
) -> CorrectnessReport:
    return verification_service.complement_correctness_check(p, prefix_bound, period_bound)


def tightness_report(n: int, max_priority: int, cap: Optional[int] = None) -> TightnessReport:
    return verification_service.tightness_report(n, max_priority, cap)


def hard_word_report(registry: FullAutomaton, t: FNHT, tree_index: int, h: Optional[int] = None) -> HardWordReport:
    return verification_service.hard_word_report(registry, t, tree_index, h)
