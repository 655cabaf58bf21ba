"""
Сервис полного автомата P_n^Π и трудных слов β_t, γ_t, α^t
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple
from loguru import logger

from parity_complement.config import settings
from parity_complement.models.automata import (
    LassoWord, ParityAutomaton, PriorityError, opt_priority,
)
from parity_complement.models.fnht import FNHT, ROOT
from parity_complement.models.schemas import LetterMatrixFile
from parity_complement.services.fnht_service import fnht_service
from parity_complement.utils.helpers import bits


class HardnessError(Exception):
    """Исключение для ошибок полного автомата и трудных слов"""
    pass


Entries = Tuple[Tuple[Tuple[int, int], FrozenSet[int]], ...]


@dataclass(frozen=True)
class PriorityMatrixLetter:
    """Буква Q×Q → 2^Π; хранятся только непустые клетки, отсортированные по паре"""
    entries: Entries = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[Tuple[int, int], Iterable[int]]) -> "PriorityMatrixLetter":
        cells = []
        for pair, priorities in mapping.items():
            values = frozenset(priorities)
            if values:
                cells.append((pair, values))
        return cls(tuple(sorted(cells, key=lambda cell: cell[0])))

    def as_dict(self) -> Dict[Tuple[int, int], FrozenSet[int]]:
        return dict(self.entries)

    def get(self, source: int, target: int) -> FrozenSet[int]:
        return self.as_dict().get((source, target), frozenset())

    def covers(self, other: "PriorityMatrixLetter") -> bool:
        """Каждая клетка other содержится в соответствующей клетке self"""
        mine = self.as_dict()
        return all(values <= mine.get(pair, frozenset()) for pair, values in other.entries)

    def to_file(self, names: List[str]) -> LetterMatrixFile:
        return LetterMatrixFile(matrix={
            f"{names[p]},{names[q]}": sorted(values) for (p, q), values in self.entries
        })

    @classmethod
    def from_file(cls, record: LetterMatrixFile, names: List[str]) -> "PriorityMatrixLetter":
        ids = {name: i for i, name in enumerate(names)}
        mapping = {}
        for key, values in record.matrix.items():
            source, _, target = key.partition(",")
            if source not in ids or target not in ids:
                raise HardnessError(f"letter cell uses unknown state: {key!r}")
            mapping[(ids[source], ids[target])] = values
        return cls.from_mapping(mapping)


@dataclass
class FullAutomaton:
    """
    Полный автомат P_n^Π с алфавитом, регистрируемым по требованию

    Состояния q0..q{n-1}, все начальные. Буквы получают имена L0, L1, ...
    в порядке регистрации; одинаковые по содержимому буквы не дублируются.
    """

    n: int
    priorities: FrozenSet[int]
    letters: List[PriorityMatrixLetter] = field(default_factory=list)
    _ids: Dict[PriorityMatrixLetter, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise HardnessError("full automaton needs at least one state")
        if not self.priorities:
            raise PriorityError("empty priority set")
        values = sorted(self.priorities)
        if values[0] not in (0, 1) or values != list(range(values[0], values[-1] + 1)):
            raise PriorityError(f"priority set must be contiguous with min in {{0,1}}: {values}")
        if opt_priority(self.priorities) < 2:
            raise PriorityError("construction requires max Π ≥ 2")

    @property
    def state_names(self) -> List[str]:
        return [f"q{i}" for i in range(self.n)]

    def register(self, letter: PriorityMatrixLetter) -> str:
        """
        Регистрирует букву и возвращает ее идентификатор

        Args:
            letter: Буква-матрица над Q×Q

        Returns:
            Имя буквы "L<k>"
        """
        for (p, q), values in letter.entries:
            if not (0 <= p < self.n and 0 <= q < self.n):
                raise HardnessError(f"letter cell outside the state set: {(p, q)}")
            if not values <= self.priorities:
                raise HardnessError(f"letter uses priorities outside Π: {sorted(values - self.priorities)}")
        index = self._ids.get(letter)
        if index is None:
            index = len(self.letters)
            self.letters.append(letter)
            self._ids[letter] = index
        return f"L{index}"

    def letter(self, name: str) -> PriorityMatrixLetter:
        try:
            return self.letters[int(name[1:])]
        except (ValueError, IndexError):
            raise HardnessError(f"unregistered letter: {name!r}")

    def automaton(self) -> ParityAutomaton:
        """Явный автомат четности над зарегистрированными буквами"""
        names = self.state_names
        transitions = [
            (names[p], f"L{k}", names[q], opt_priority(values))
            for k, letter in enumerate(self.letters)
            for (p, q), values in letter.entries
        ]
        return ParityAutomaton.build(
            names,
            [f"L{k}" for k in range(len(self.letters))],
            names,
            transitions,
            priorities=self.priorities,
        )

    def as_partial_function(self, name: str) -> Dict[Tuple[str, str], int]:
        """Буква как частичная функция Q×Q → Π (opt по клетке)"""
        names = self.state_names
        return {
            (names[p], names[q]): opt_priority(values)
            for (p, q), values in self.letter(name).entries
        }

    def letter_files(self) -> Dict[str, LetterMatrixFile]:
        names = self.state_names
        return {f"L{k}": letter.to_file(names) for k, letter in enumerate(self.letters)}


def full_parity_automaton(n: int, priorities: Iterable[int]) -> FullAutomaton:
    """
    Создает полный автомат P_n^Π без материализации алфавита

    Args:
        n: Число состояний
        priorities: Непрерывное множество приоритетов с min ∈ {0,1}

    Returns:
        Реестр букв полного автомата
    """
    return FullAutomaton(n=n, priorities=frozenset(priorities))


# ==============================================
# БУКВЫ β_t И γ_t
# ==============================================

def _pairs(sources: int, targets: int) -> Iterable[Tuple[int, int]]:
    for p in bits(sources):
        for q in bits(targets):
            yield p, q


def _beta_cells(t: FNHT, priorities: FrozenSet[int]) -> Dict[Tuple[int, int], set]:
    cells: Dict[Tuple[int, int], set] = {}

    def add(sources: int, targets: int, priority: int) -> None:
        for pair in _pairs(sources, targets):
            cells.setdefault(pair, set()).add(priority)

    for i in range(len(t)):
        level = t.levels[i]
        if t.stepchild_flags[i]:
            if level + 1 in priorities:
                add(t.states[i], t.states[i], level + 1)
            kids = t.children[i]
            for kid in kids:
                add(t.recurrent[i], t.states[kid], level)
            for position, younger in enumerate(kids):
                for older in kids[:position]:
                    add(t.states[younger], t.states[older], level)
        else:
            add(t.pure[i], t.recurrent[i], level)
            add(t.recurrent[i], t.recurrent[i], level - 1)
            add(t.pure[i], t.pure[i], level - 1)
    return cells


def _check_full_tree(t: FNHT, priorities: FrozenSet[int]) -> None:
    if ROOT not in t.index:
        raise HardnessError("tree has no root")
    if t.max_even != max(p for p in priorities if p % 2 == 0):
        raise HardnessError("tree level does not match Π")


def beta_letter(t: FNHT, priorities: Iterable[int]) -> PriorityMatrixLetter:
    """
    Буква β_t: объединение шести правил по всем узлам

    Args:
        t: Полное корректное FNHT
        priorities: Множество приоритетов Π

    Returns:
        Буква-матрица
    """
    values = frozenset(priorities)
    _check_full_tree(t, values)
    return PriorityMatrixLetter.from_mapping(_beta_cells(t, values))


def gamma_letter(t: FNHT, priorities: Iterable[int]) -> PriorityMatrixLetter:
    """
    Буква γ_t ⊇ β_t: три дополнительных правила

    Args:
        t: Полное корректное FNHT
        priorities: Множество приоритетов Π

    Returns:
        Буква-матрица
    """
    values = frozenset(priorities)
    _check_full_tree(t, values)
    cells = _beta_cells(t, values)

    def add(sources: int, priority: int) -> None:
        for pair in _pairs(sources, sources):
            cells.setdefault(pair, set()).add(priority)

    for i in range(len(t)):
        level = t.levels[i]
        if t.stepchild_flags[i]:
            add(t.recurrent[i], level)
        elif level - 2 in values:
            add(t.recurrent[i], level - 2)
            add(t.pure[i], level - 2)
    return PriorityMatrixLetter.from_mapping(cells)


def default_h(n: int, max_priority: int) -> int:
    """h = |fnht(Q,π)| + 1, если не переопределено в настройках"""
    if settings.hard_word_h is not None:
        return settings.hard_word_h
    universe = (1 << n) - 1
    return len(fnht_service.enumerate_fnhts(universe, max_priority)) + 1


def hard_word(
    t: FNHT, h: Optional[int], registry: FullAutomaton
) -> Tuple[LassoWord, str, str]:
    """
    Строит α^t = (β_t γ_t^{h-1})^ω

    Args:
        t: Полное FNHT
        h: Длина периода (None - значение по умолчанию)
        registry: Полный автомат, в котором регистрируются β_t и γ_t

    Returns:
        Лассо-слово и имена букв β_t и γ_t
    """
    if h is None:
        h = default_h(registry.n, max(registry.priorities))
    if h < 2:
        raise HardnessError(f"h must be at least 2, got {h}")
    beta = registry.register(beta_letter(t, registry.priorities))
    gamma = registry.register(gamma_letter(t, registry.priorities))
    logger.debug(f"Трудное слово: h={h}, β={beta}, γ={gamma}")
    return LassoWord((), (beta,) + (gamma,) * (h - 1)), beta, gamma
