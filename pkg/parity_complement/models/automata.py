"""
Модели автоматов с переходной приемкой: автоматы четности, автоматы Бюхи,
лассо-слова, порядок приоритетов и нормализация множества приоритетов
"""
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, Optional, Sequence, Tuple, Union
from loguru import logger

from parity_complement.utils.helpers import mask_of


class AutomatonError(ValueError):
    """Исключение для некорректных автоматов и слов"""
    pass


class PriorityError(AutomatonError):
    """Исключение для недопустимых множеств приоритетов"""
    pass


LetterRef = Union[int, str]


# ==============================================
# ПОРЯДОК ПРИОРИТЕТОВ
# ==============================================

def better_or_equal(i: int, j: int) -> bool:
    """
    Проверяет i ≽ j в порядке "лучше для приемки"

    Любой четный лучше любого нечетного, больший четный лучше меньшего,
    меньший нечетный лучше большего. Отрицательные аргументы допустимы.

    Args:
        i: Первый приоритет
        j: Второй приоритет

    Returns:
        True если i = j или i ≻ j
    """
    if i == j:
        return True
    i_even = i % 2 == 0
    j_even = j % 2 == 0
    if i_even and not j_even:
        return True
    if j_even and not i_even:
        return False
    if i_even:
        return i > j
    return i < j


def opt_priority(priorities: Iterable[int]) -> int:
    """
    Возвращает оптимальный для приемки приоритет множества

    Args:
        priorities: Непустое множество приоритетов

    Returns:
        Элемент, ≽-больший или равный всем остальным
    """
    best: Optional[int] = None
    for priority in priorities:
        if best is None or better_or_equal(priority, best):
            best = priority
    if best is None:
        raise PriorityError("empty priority set")
    return best


# ==============================================
# АВТОМАТЫ
# ==============================================

@dataclass(frozen=True)
class ExplicitAutomaton:
    """Общая часть явных автоматов: состояния, алфавит, начальные состояния"""

    states: Tuple[str, ...]
    alphabet: Tuple[str, ...]
    initial: int  # Битовая маска над индексами states

    def __post_init__(self):
        if len(set(self.states)) != len(self.states):
            raise AutomatonError("duplicate state ids")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise AutomatonError("duplicate letter ids")
        if not self.initial:
            raise AutomatonError("initial state set is empty")
        if self.initial >> len(self.states):
            raise AutomatonError("initial states outside the state set")

    @cached_property
    def state_ids(self) -> Dict[str, int]:
        return {name: index for index, name in enumerate(self.states)}

    @cached_property
    def letter_ids(self) -> Dict[str, int]:
        return {name: index for index, name in enumerate(self.alphabet)}

    @property
    def all_states(self) -> int:
        """Маска всех состояний"""
        return (1 << len(self.states)) - 1

    def state_index(self, name: str) -> int:
        try:
            return self.state_ids[name]
        except KeyError:
            raise AutomatonError(f"unknown state: {name}")

    def letter_index(self, letter: LetterRef) -> int:
        """
        Приводит букву к индексу

        Args:
            letter: Индекс или идентификатор буквы

        Returns:
            Индекс буквы в алфавите
        """
        if isinstance(letter, int):
            if 0 <= letter < len(self.alphabet):
                return letter
            raise AutomatonError(f"letter index out of range: {letter}")
        try:
            return self.letter_ids[letter]
        except KeyError:
            raise AutomatonError(f"foreign letter: {letter}")

    def state_mask(self, names: Iterable[str]) -> int:
        return mask_of(self.state_index(name) for name in names)

    def _check_transition_indices(self, transitions) -> None:
        seen = set()
        for source, letter, target, _ in transitions:
            if not (0 <= source < len(self.states) and 0 <= target < len(self.states)):
                raise AutomatonError(f"transition uses unknown state: {(source, letter, target)}")
            if not 0 <= letter < len(self.alphabet):
                raise AutomatonError(f"transition uses unknown letter: {(source, letter, target)}")
            key = (source, letter, target)
            if key in seen:
                raise AutomatonError(
                    f"duplicate transition: {self.states[source]} -{self.alphabet[letter]}-> {self.states[target]}"
                )
            seen.add(key)


@dataclass(frozen=True)
class ParityAutomaton(ExplicitAutomaton):
    """Недетерминированный автомат четности с приоритетами на переходах"""

    transitions: Tuple[Tuple[int, int, int, int], ...] = ()  # (source, letter, target, priority)
    declared_priorities: FrozenSet[int] = frozenset()

    def __post_init__(self):
        super().__post_init__()
        self._check_transition_indices(self.transitions)
        for transition in self.transitions:
            if transition[3] < 0:
                raise PriorityError(f"negative priority on transition {transition[:3]}")
        if any(priority < 0 for priority in self.declared_priorities):
            raise PriorityError("negative declared priority")

    @classmethod
    def build(
        cls,
        states: Sequence[str],
        alphabet: Sequence[str],
        initial: Iterable[str],
        transitions: Iterable[Tuple[str, str, str, int]],
        priorities: Iterable[int] = (),
    ) -> "ParityAutomaton":
        """
        Создает автомат из идентификаторов

        Args:
            states: Идентификаторы состояний
            alphabet: Идентификаторы букв
            initial: Начальные состояния
            transitions: Тройки переходов с приоритетом
            priorities: Объявленное множество приоритетов (дополнительно к используемым)

        Returns:
            Автомат четности
        """
        state_ids = {name: index for index, name in enumerate(states)}
        letter_ids = {name: index for index, name in enumerate(alphabet)}
        try:
            encoded = tuple(sorted(
                (state_ids[source], letter_ids[letter], state_ids[target], int(priority))
                for source, letter, target, priority in transitions
            ))
            initial_mask = mask_of(state_ids[name] for name in initial)
        except KeyError as e:
            raise AutomatonError(f"unknown id in automaton: {e}")
        return cls(
            states=tuple(states),
            alphabet=tuple(alphabet),
            initial=initial_mask,
            transitions=encoded,
            declared_priorities=frozenset(priorities),
        )

    @cached_property
    def successors(self) -> Tuple[Tuple[Tuple[Tuple[int, int], ...], ...], ...]:
        """Индекс [буква][состояние] -> ((цель, приоритет), ...)"""
        table = [[[] for _ in self.states] for _ in self.alphabet]
        for source, letter, target, priority in self.transitions:
            table[letter][source].append((target, priority))
        return tuple(tuple(tuple(cell) for cell in row) for row in table)

    @cached_property
    def priority_set(self) -> FrozenSet[int]:
        """Эффективное множество приоритетов: объявленные и используемые"""
        return frozenset(t[3] for t in self.transitions) | self.declared_priorities

    @property
    def max_priority(self) -> int:
        if not self.priority_set:
            raise PriorityError("empty priority set")
        return max(self.priority_set)

    def named_transitions(self) -> Iterator[Tuple[str, str, str, int]]:
        for source, letter, target, priority in self.transitions:
            yield self.states[source], self.alphabet[letter], self.states[target], priority

    def with_priorities(self, mapping: Dict[int, int]) -> "ParityAutomaton":
        """Копия с переназначенными приоритетами; структура не меняется"""
        return ParityAutomaton(
            states=self.states,
            alphabet=self.alphabet,
            initial=self.initial,
            transitions=tuple((s, a, t, mapping[p]) for s, a, t, p in self.transitions),
            declared_priorities=frozenset(mapping[p] for p in self.priority_set),
        )


@dataclass(frozen=True)
class BuchiAutomaton(ExplicitAutomaton):
    """Недетерминированный автомат Бюхи с принимающими переходами"""

    transitions: Tuple[Tuple[int, int, int, bool], ...] = ()  # (source, letter, target, accepting)

    def __post_init__(self):
        super().__post_init__()
        self._check_transition_indices(self.transitions)

    @classmethod
    def build(
        cls,
        states: Sequence[str],
        alphabet: Sequence[str],
        initial: Iterable[str],
        transitions: Iterable[Tuple[str, str, str, bool]],
    ) -> "BuchiAutomaton":
        """
        Создает автомат из идентификаторов

        Args:
            states: Идентификаторы состояний
            alphabet: Идентификаторы букв
            initial: Начальные состояния
            transitions: Тройки переходов с флагом приемки

        Returns:
            Автомат Бюхи
        """
        state_ids = {name: index for index, name in enumerate(states)}
        letter_ids = {name: index for index, name in enumerate(alphabet)}
        try:
            encoded = tuple(sorted(
                (state_ids[source], letter_ids[letter], state_ids[target], bool(accepting))
                for source, letter, target, accepting in transitions
            ))
            initial_mask = mask_of(state_ids[name] for name in initial)
        except KeyError as e:
            raise AutomatonError(f"unknown id in automaton: {e}")
        return cls(
            states=tuple(states),
            alphabet=tuple(alphabet),
            initial=initial_mask,
            transitions=encoded,
        )

    @cached_property
    def successors(self) -> Tuple[Tuple[Tuple[Tuple[int, bool], ...], ...], ...]:
        """Индекс [буква][состояние] -> ((цель, принимающий), ...)"""
        table = [[[] for _ in self.states] for _ in self.alphabet]
        for source, letter, target, accepting in self.transitions:
            table[letter][source].append((target, accepting))
        return tuple(tuple(tuple(cell) for cell in row) for row in table)

    @cached_property
    def accepting(self) -> FrozenSet[Tuple[int, int, int]]:
        return frozenset((s, a, t) for s, a, t, flag in self.transitions if flag)

    def named_transitions(self) -> Iterator[Tuple[str, str, str, bool]]:
        for source, letter, target, accepting in self.transitions:
            yield self.states[source], self.alphabet[letter], self.states[target], accepting


@dataclass(frozen=True)
class LassoWord:
    """Ультимативно периодическое слово u·v^ω"""

    prefix: Tuple[str, ...] = ()
    period: Tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise AutomatonError("lasso period must be non-empty")

    @property
    def positions(self) -> int:
        """Число позиций развертки |u| + |v|"""
        return len(self.prefix) + len(self.period)

    def letter_at(self, position: int) -> str:
        if position < len(self.prefix):
            return self.prefix[position]
        return self.period[position - len(self.prefix)]

    def next_position(self, position: int) -> int:
        following = position + 1
        return following if following < self.positions else len(self.prefix)

    def rotated(self) -> "LassoWord":
        """То же слово с периодом, сдвинутым на одну букву"""
        head = self.period[0]
        return LassoWord(self.prefix + (head,), self.period[1:] + (head,))

    def unrolled(self, times: int) -> "LassoWord":
        """То же слово с периодом, повторенным times раз"""
        return LassoWord(self.prefix, self.period * times)

    def letters(self) -> FrozenSet[str]:
        return frozenset(self.prefix) | frozenset(self.period)

    def __str__(self) -> str:
        return f"{' '.join(self.prefix)}({' '.join(self.period)})^ω".strip()


# ==============================================
# НОРМАЛИЗАЦИЯ И ПРЕДУСЛОВИЯ
# ==============================================

def normalization_map(priorities: Iterable[int]) -> Dict[int, int]:
    """
    Строит отображение приоритетов в нормальную форму

    Сначала сдвиги на -2 до min ∈ {0,1}, затем удаление дыр начиная с наименьшей.

    Args:
        priorities: Множество приоритетов

    Returns:
        Отображение старый -> новый приоритет
    """
    mapping = {p: p for p in priorities}
    if not mapping:
        return mapping
    while min(mapping.values()) >= 2:
        mapping = {p: v - 2 for p, v in mapping.items()}
    while True:
        values = set(mapping.values())
        holes = [h for h in range(min(values), max(values)) if h not in values]
        if not holes:
            return mapping
        hole = holes[0]
        mapping = {p: (v - 2 if v > hole else v) for p, v in mapping.items()}


def is_normalized(p: ParityAutomaton) -> bool:
    priorities = p.priority_set
    if not priorities:
        return True
    return min(priorities) in (0, 1) and len(priorities) == max(priorities) - min(priorities) + 1


def normalize(p: ParityAutomaton) -> ParityAutomaton:
    """
    Приводит множество приоритетов к виду min Π ∈ {0,1} без дыр

    Args:
        p: Автомат четности

    Returns:
        Автомат с той же структурой и теми же принимающими прогонами
    """
    mapping = normalization_map(p.priority_set)
    if all(k == v for k, v in mapping.items()):
        return p
    logger.debug(f"Нормализация приоритетов: {sorted(p.priority_set)} -> {sorted(set(mapping.values()))}")
    return p.with_priorities(mapping)


def max_even_priority(p: ParityAutomaton) -> int:
    """
    Возвращает максимальный четный приоритет π_e = opt Π

    Args:
        p: Нормализованный автомат

    Returns:
        opt Π, не меньше 2
    """
    if not p.priority_set:
        raise PriorityError("construction requires max Π ≥ 2")
    best = opt_priority(p.priority_set)
    if best < 2:
        raise PriorityError("construction requires max Π ≥ 2")
    return best


def buchi_as_parity(b: BuchiAutomaton) -> ParityAutomaton:
    """
    Представляет автомат Бюхи как автомат четности с Π = {1,2}

    Args:
        b: Автомат Бюхи

    Returns:
        Автомат четности той же структуры
    """
    return ParityAutomaton(
        states=b.states,
        alphabet=b.alphabet,
        initial=b.initial,
        transitions=tuple((s, a, t, 2 if flag else 1) for s, a, t, flag in b.transitions),
        declared_priorities=frozenset({1, 2}),
    )


def lift_priorities(p: ParityAutomaton) -> ParityAutomaton:
    """
    Поднимает нормализованный автомат с max Π < 2 в область конструкции

    Приоритеты сдвигаются на +2, объявляются {1,2}. Четность и порядок
    приоритетов сохраняются, поэтому язык не меняется.

    Args:
        p: Нормализованный автомат

    Returns:
        Автомат с max Π ≥ 2 (или p, если это уже так)
    """
    if p.priority_set and max(p.priority_set) >= 2:
        return p
    lifted = p.with_priorities({priority: priority + 2 for priority in p.priority_set})
    logger.warning(f"Приоритеты {sorted(p.priority_set)} подняты на 2 для конструкции")
    return replace(lifted, declared_priorities=lifted.declared_priorities | {1, 2})
