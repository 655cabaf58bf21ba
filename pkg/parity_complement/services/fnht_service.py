"""
Сервис перечисления FNHT/MFT и инъекций для подсчета точности
"""
import itertools
from typing import Dict, Iterator, List, Optional, Tuple
from loguru import logger

from parity_complement.config import settings
from parity_complement.models.fnht import (
    FNHT, MFT, ROOT, STEP, FNHTError, Marker, MarkerKind, Path,
    is_full_fnht, is_full_marking, is_stepchild, marker_candidates, max_even_for,
)
from parity_complement.utils.helpers import nonempty_submasks, ordered_partitions, submasks


class CapExceededError(RuntimeError):
    """Исключение для превышения настроенного лимита"""

    def __init__(self, what: str, cap: int):
        super().__init__(f"{what} exceeds cap {cap}")
        self.what = what
        self.cap = cap


Node = Tuple[Path, int, int, int]  # (путь, l_s, l_p, l_r)


class _Budget:
    """Счетчик выданных объектов с лимитом"""

    def __init__(self, what: str, cap: int):
        self.what = what
        self.cap = cap
        self.count = 0

    def spend(self, amount: int = 1) -> None:
        self.count += amount
        if self.count > self.cap:
            logger.error(f"Превышен лимит перечисления: {self.what} > {self.cap}")
            raise CapExceededError(self.what, self.cap)


def _natural_subtrees(path: Path, level: int, states: int) -> Iterator[List[Node]]:
    """Поддеревья естественного ребенка с множеством состояний states"""
    for pure in nonempty_submasks(states):
        node = (path, states, pure, states & ~pure)
        yield [node]
        if level - 2 >= 2:
            for sub in _stepchild_subtrees(path + (STEP,), level - 2, pure, allow_leaf=False):
                yield [node] + sub


def _stepchild_subtrees(path: Path, level: int, states: int, allow_leaf: bool) -> Iterator[List[Node]]:
    """Поддеревья пасынка: l_r и упорядоченное разбиение остатка между детьми"""
    for recurrent in submasks(states):
        rest = states & ~recurrent
        if not rest:
            if allow_leaf:
                yield [(path, states, 0, states)]
            continue
        for blocks in ordered_partitions(rest):
            options = [
                list(_natural_subtrees(path + (c,), level, block))
                for c, block in enumerate(blocks)
            ]
            head = (path, states, 0, recurrent)
            for combo in itertools.product(*options):
                yield [head] + [node for sub in combo for node in sub]


def canonical_key(t: FNHT) -> tuple:
    """Порядок: размер дерева, пути, затем метки по индексам состояний"""
    return (len(t.paths), t.paths, t.states, t.pure, t.recurrent)


class FNHTService:
    """Сервис перечисления плоских деревьев с кешированием по корню"""

    def __init__(self):
        self.enumeration_cap = settings.enumeration_cap
        self._trees: Dict[Tuple[int, int], Tuple[FNHT, ...]] = {}
        self._marked: Dict[Tuple[int, int], Tuple[MFT, ...]] = {}

    @staticmethod
    def _check_arguments(states: int, max_priority: int) -> None:
        if max_priority < 2:
            raise FNHTError("enumeration requires max priority ≥ 2")
        if not states:
            raise FNHTError("enumeration requires a non-empty state set")

    def fnhts_with_root(self, root_states: int, max_priority: int, cap: Optional[int] = None) -> Tuple[FNHT, ...]:
        """
        Все FNHT с меткой корня root_states

        Args:
            root_states: Маска l_s(ε)
            max_priority: Максимальный приоритет π
            cap: Лимит числа деревьев

        Returns:
            Деревья в каноническом порядке
        """
        self._check_arguments(root_states, max_priority)
        cap = cap or self.enumeration_cap
        key = (root_states, max_priority)
        trees = self._trees.get(key)
        if trees is None:
            budget = _Budget("FNHT enumeration", cap)
            max_even = max_even_for(max_priority)
            collected = []
            for nodes in _stepchild_subtrees(ROOT, max_even, root_states, allow_leaf=max_priority % 2 == 1):
                budget.spend()
                collected.append(FNHT.from_labels({n[0]: n[1:] for n in nodes}, max_even))
            trees = tuple(sorted(collected, key=canonical_key))
            self._trees[key] = trees
        if len(trees) > cap:
            raise CapExceededError("FNHT enumeration", cap)
        return trees

    def enumerate_fnhts(
        self, state_universe: int, max_priority: int, full_only: bool = False, cap: Optional[int] = None
    ) -> List[FNHT]:
        """
        Перечисляет fnht(Q, π)

        Args:
            state_universe: Маска Q
            max_priority: Максимальный приоритет π
            full_only: Только полные деревья (l_s(ε) = Q)
            cap: Лимит числа деревьев

        Returns:
            Каждое корректное дерево ровно один раз, в каноническом порядке
        """
        self._check_arguments(state_universe, max_priority)
        cap = cap or self.enumeration_cap
        budget = _Budget("FNHT enumeration", cap)
        roots = [state_universe] if full_only else list(nonempty_submasks(state_universe))
        collected: List[FNHT] = []
        for root in roots:
            trees = self.fnhts_with_root(root, max_priority, cap)
            budget.spend(len(trees))
            collected.extend(trees)
        collected.sort(key=canonical_key)
        logger.debug(f"Перечислено FNHT: {len(collected)} (π={max_priority}, full_only={full_only})")
        return collected

    def mfts_with_root(self, root_states: int, max_priority: int, cap: Optional[int] = None) -> Tuple[MFT, ...]:
        """Все MFT с меткой корня root_states"""
        cap = cap or self.enumeration_cap
        key = (root_states, max_priority)
        marked = self._marked.get(key)
        if marked is None:
            budget = _Budget("MFT enumeration", cap)
            collected = []
            for t in self.fnhts_with_root(root_states, max_priority, cap):
                for marker, full_set in marker_candidates(t):
                    for marking in nonempty_submasks(full_set):
                        budget.spend()
                        collected.append(MFT(t, marker, marking))
            marked = tuple(collected)
            self._marked[key] = marked
        if len(marked) > cap:
            raise CapExceededError("MFT enumeration", cap)
        return marked

    def enumerate_mfts(
        self, state_universe: int, max_priority: int, full_only: bool = False, cap: Optional[int] = None
    ) -> List[MFT]:
        """
        Перечисляет mft(Q, π): дерево, маркер-кандидат, непустое подмножество

        Args:
            state_universe: Маска Q
            max_priority: Максимальный приоритет π
            full_only: Только над полными деревьями
            cap: Лимит числа MFT

        Returns:
            MFT в порядке деревьев, затем кругового порядка маркеров
        """
        cap = cap or self.enumeration_cap
        budget = _Budget("MFT enumeration", cap)
        collected: List[MFT] = []
        for t in self.enumerate_fnhts(state_universe, max_priority, full_only, cap):
            for marker, full_set in marker_candidates(t):
                for marking in nonempty_submasks(full_set):
                    budget.spend()
                    collected.append(MFT(t, marker, marking))
        logger.debug(f"Перечислено MFT: {len(collected)} (π={max_priority}, full_only={full_only})")
        return collected


# ==============================================
# ИНЪЕКЦИИ
# ==============================================

def _natural_child_count(labels: Dict[Path, Tuple[int, int, int]], parent: Path) -> int:
    depth = len(parent) + 1
    return sum(
        1 for path in labels
        if len(path) == depth and path[:-1] == parent and path[-1] != STEP
    )


def inject_nonfull_fnht(t: FNHT, state_universe: int) -> FNHT:
    """
    Отображает неполное дерево в полное

    Корень получает нового младшего естественного ребенка с l_s = l_p = Q ∖ l_s(ε).

    Args:
        t: Корректное неполное дерево
        state_universe: Маска Q

    Returns:
        Полное корректное дерево
    """
    if is_full_fnht(t, state_universe):
        raise FNHTError("already full")
    labels = t.labels()
    root_states, root_pure, root_recurrent = labels[ROOT]
    missing = state_universe & ~root_states
    fresh = (_natural_child_count(labels, ROOT),)
    labels[ROOT] = (state_universe, root_pure, root_recurrent)
    labels[fresh] = (missing, missing, 0)
    return FNHT.from_labels(labels, t.max_even)


def inject_nonfull_mft(m: MFT) -> MFT:
    """
    Отображает MFT с неполной разметкой в MFT с полной разметкой

    Размеченные состояния Q_m переносятся в новый узел с l_s = l_p = Q_m:
    младшего брата для естественного ребенка, младшего ребенка для пасынка.

    Args:
        m: Корректное MFT с неполной разметкой

    Returns:
        Корректное MFT с полной разметкой
    """
    if is_full_marking(m):
        raise FNHTError("marking already full")
    t = m.base
    labels = t.labels()
    node = m.marker.node
    marked = m.marking

    if len(t) == 1:
        # Дерево из одного корня: дети забирают немаркированные состояния
        root_states = labels[ROOT][0]
        labels[ROOT] = (root_states, 0, marked)
        labels[(0,)] = (root_states & ~marked, root_states & ~marked, 0)
        return MFT(FNHT.from_labels(labels, t.max_even), Marker(ROOT, MarkerKind.RECURRENT), marked)

    states, pure, recurrent = labels[node]
    if is_stepchild(node):
        fresh = node + (_natural_child_count(labels, node),)
        labels[node] = (states, pure, recurrent & ~marked)
        marking = recurrent & ~marked
    else:
        parent = node[:-1]
        fresh = parent + (_natural_child_count(labels, parent),)
        if m.marker.kind is MarkerKind.RECURRENT:
            labels[node] = (states & ~marked, pure, recurrent & ~marked)
            marking = recurrent & ~marked
        else:
            labels[node] = (states & ~marked, pure & ~marked, recurrent)
            marking = pure & ~marked
    labels[fresh] = (marked, marked, 0)
    return MFT(FNHT.from_labels(labels, t.max_even), m.marker, marking)


# Глобальный экземпляр сервиса
fnht_service = FNHTService()
