"""
Сервис дополнения автоматов четности до автоматов Бюхи

Состояния дополнения: подмножества Q (первая фаза) и MFT (вторая фаза).
Переходы первой и второй фаз детерминированы; переход между фазами
недетерминированно выбирает MFT с корнем δ(S, σ).
"""
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union
from loguru import logger

from parity_complement.config import settings
from parity_complement.models.automata import (
    BuchiAutomaton, LetterRef, ParityAutomaton, better_or_equal, max_even_priority,
)
from parity_complement.models.fnht import (
    FNHT, MFT, MarkerKind, is_valid_fnht, marker_set, next_marker,
)
from parity_complement.models.schemas import mft_key, subset_key
from parity_complement.services.fnht_service import CapExceededError, fnht_service
from parity_complement.utils.helpers import bits


@dataclass(frozen=True)
class Phase1:
    """Состояние подмножества Q₁ = 2^Q"""
    subset: int


@dataclass(frozen=True)
class Phase2:
    """Состояние MFT из Q₂ = mft(Q, π)"""
    mft: MFT


ComplementState = Union[Phase1, Phase2]


@dataclass(frozen=True)
class StepOutcome:
    """Результат шага: преемник и флаг приемки; без преемника - блокировка"""
    successor: Optional[ComplementState]
    accepting: bool = False

    @property
    def blocked(self) -> bool:
        return self.successor is None


BLOCKED = StepOutcome(successor=None)


# ==============================================
# ФУНКЦИИ ПЕРЕХОДОВ
# ==============================================

def delta(p: ParityAutomaton, states: int, letter: LetterRef) -> int:
    """
    Образ множества состояний по букве

    Args:
        p: Автомат четности
        states: Маска S
        letter: Буква

    Returns:
        δ(S, σ)
    """
    row = p.successors[p.letter_index(letter)]
    image = 0
    for source in bits(states):
        for target, _ in row[source]:
            image |= 1 << target
    return image


def delta_i(p: ParityAutomaton, states: int, letter: LetterRef, i: int) -> int:
    """
    Образ по переходам с приоритетом ≽ i

    Args:
        p: Автомат четности
        states: Маска S
        letter: Буква
        i: Порог (допускаются отрицательные значения)

    Returns:
        δ_i(S, σ)
    """
    row = p.successors[p.letter_index(letter)]
    image = 0
    for source in bits(states):
        for target, priority in row[source]:
            if better_or_equal(priority, i):
                image |= 1 << target
    return image


def subset_step(p: ParityAutomaton, states: int, letter: LetterRef) -> StepOutcome:
    """Шаг первой фазы; принимающий только переход (∅, σ, ∅)"""
    return StepOutcome(Phase1(delta(p, states, letter)), accepting=states == 0)


def transfer_targets(p: ParityAutomaton, states: int, letter: LetterRef) -> Tuple[MFT, ...]:
    """
    Цели переходов между фазами

    Args:
        p: Автомат четности с π_e ≥ 2
        states: Маска S
        letter: Буква

    Returns:
        Все корректные MFT с l_s(ε) = δ(S, σ); пусто, если образ пуст
    """
    max_even_priority(p)
    image = delta(p, states, letter)
    if not image:
        return ()
    return fnht_service.mfts_with_root(image, p.max_priority)


def _step_labels(p: ParityAutomaton, t: FNHT, letter: int) -> FNHT:
    """Новые метки дерева после чтения буквы (структура дерева та же)"""
    size = len(t)
    levels = t.levels
    stepchild = t.stepchild_flags
    reach = [0] * size  # l_s''
    reach_recurrent = [0] * size  # l_r'' естественных детей
    for i in range(size):
        level = levels[i]
        if stepchild[i]:
            reach[i] = delta_i(p, t.states[i], letter, level + 1)
        else:
            reach[i] = delta_i(p, t.states[i], letter, level - 1)
            reach_recurrent[i] = (
                delta_i(p, t.recurrent[i], letter, level - 1)
                | delta_i(p, t.states[i], letter, level)
            )

    new_states = [0] * size
    new_pure = [0] * size
    new_recurrent = [0] * size
    older: Dict[int, int] = {}  # родитель -> объединение l_s'' старших братьев
    for i in range(size):
        parent = t.parents[i]
        if parent < 0:
            new_states[i] = reach[i]
        elif stepchild[i]:
            new_states[i] = new_pure[parent]
            assert not new_pure[parent] & ~reach[i], "pure states escape the stepchild image"
        else:
            seen = older.get(parent, 0)
            new_states[i] = (reach[i] & new_states[parent]) & ~seen
            older[parent] = seen | reach[i]
            new_recurrent[i] = reach_recurrent[i] & new_states[i]
            new_pure[i] = new_states[i] & ~new_recurrent[i]

    for i in range(size):
        if stepchild[i]:
            covered = 0
            for kid in t.children[i]:
                covered |= new_states[kid]
            new_recurrent[i] = new_states[i] & ~covered
            new_pure[i] = 0
    return t.relabel(new_states, new_pure, new_recurrent)


def mft_step(p: ParityAutomaton, m: MFT, letter: LetterRef) -> StepOutcome:
    """
    Шаг второй фазы

    Args:
        p: Автомат четности
        m: Текущее MFT
        letter: Буква

    Returns:
        Преемник и флаг приемки; BLOCKED, если новые метки не образуют FNHT
    """
    a = p.letter_index(letter)
    t = _step_labels(p, m.base, a)
    if not is_valid_fnht(t, p.all_states, p.max_priority):
        return BLOCKED

    node = t.index[m.marker.node]
    level = t.levels[node]
    if m.marker.kind is MarkerKind.RECURRENT:
        remaining = delta_i(p, m.marking, a, level - 1) & t.recurrent[node]
    else:
        remaining = delta_i(p, m.marking, a, level - 3) & marker_set(t, m.marker)
    if remaining:
        return StepOutcome(Phase2(MFT(t, m.marker, remaining)), accepting=False)
    marker, full_set = next_marker(t, m.marker)
    return StepOutcome(Phase2(MFT(t, marker, full_set)), accepting=True)


def successors(p: ParityAutomaton, state: ComplementState, letter: int) -> List[Tuple[ComplementState, bool]]:
    """
    Все переходы дополнения из состояния по букве

    Args:
        p: Автомат четности
        state: Состояние дополнения
        letter: Индекс буквы

    Returns:
        Пары (преемник, принимающий)
    """
    if isinstance(state, Phase1):
        outcome = subset_step(p, state.subset, letter)
        result = [(outcome.successor, outcome.accepting)]
        result.extend((Phase2(m), False) for m in transfer_targets(p, state.subset, letter))
        return result
    outcome = mft_step(p, state.mft, letter)
    if outcome.blocked:
        return []
    return [(outcome.successor, outcome.accepting)]


def state_name(state: ComplementState, names: List[str]) -> str:
    if isinstance(state, Phase1):
        return subset_key(state.subset, names)
    return mft_key(state.mft, names)


class ComplementService:
    """Сервис построения явного автомата-дополнения"""

    def __init__(self):
        self.state_cap = settings.complement_state_cap

    def build_complement(self, p: ParityAutomaton, cap: Optional[int] = None) -> BuchiAutomaton:
        """
        Строит достижимую часть автомата Бюхи для дополнения языка

        Args:
            p: Нормализованный автомат четности с π_e ≥ 2
            cap: Лимит достижимых состояний

        Returns:
            Автомат Бюхи с начальным состоянием Phase1(I)
        """
        max_even_priority(p)
        cap = cap or self.state_cap
        names = list(p.states)
        start = Phase1(p.initial)
        order: Dict[ComplementState, int] = {start: 0}
        queue = deque([start])
        transitions = []
        while queue:
            state = queue.popleft()
            source = order[state]
            for letter in range(len(p.alphabet)):
                for successor, accepting in successors(p, state, letter):
                    target = order.get(successor)
                    if target is None:
                        if len(order) >= cap:
                            logger.error(f"Превышен лимит состояний дополнения: {cap}")
                            raise CapExceededError("complement states", cap)
                        target = len(order)
                        order[successor] = target
                        queue.append(successor)
                    transitions.append((source, letter, target, accepting))

        states = tuple(state_name(state, names) for state in order)
        complement = BuchiAutomaton(
            states=states,
            alphabet=p.alphabet,
            initial=1,
            transitions=tuple(sorted(transitions)),
        )
        phase1, phase2 = phase_counts(complement)
        logger.info(
            f"Дополнение построено: {phase1} состояний первой фазы, "
            f"{phase2} второй фазы, {len(transitions)} переходов"
        )
        return complement


def phase_counts(c: BuchiAutomaton) -> Tuple[int, int]:
    """Число состояний первой и второй фаз по именам состояний"""
    phase1 = sum(1 for name in c.states if name.startswith("S:"))
    phase2 = sum(1 for name in c.states if name.startswith("M:"))
    return phase1, phase2


# Глобальный экземпляр сервиса
complement_service = ComplementService()


def build_complement(p: ParityAutomaton, cap: Optional[int] = None) -> BuchiAutomaton:
    """Строит дополнение через глобальный сервис"""
    return complement_service.build_complement(p, cap)
