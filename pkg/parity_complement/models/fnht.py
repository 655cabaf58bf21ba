"""
Плоские вложенные деревья истории (FNHT) и размеченные плоские деревья (MFT)

Узел задается путем: кортеж из номеров естественных детей и слота STEP
для пасынка. Корень - пустой путь и сам считается пасынком.
Метки хранятся битовыми масками по индексам состояний, уровни не хранятся.
"""
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Tuple
from loguru import logger


class FNHTError(Exception):
    """Исключение для операций над деревьями"""
    pass


STEP = -1  # Зарезервированный слот пасынка, отличный от всех номеров
ROOT: Tuple[int, ...] = ()

Path = Tuple[int, ...]


def is_stepchild(path: Path) -> bool:
    """Пасынок: корень или путь, оканчивающийся на STEP"""
    return not path or path[-1] == STEP


def level_of(path: Path, max_even: int) -> int:
    """
    Вычисляет уровень узла

    Args:
        path: Путь узла
        max_even: Максимальный четный приоритет π_e

    Returns:
        π_e минус удвоенное число шагов к пасынку
    """
    return max_even - 2 * sum(1 for step in path if step == STEP)


def path_to_str(path: Path) -> str:
    """Кодирует путь как "0.s.1"; корень - пустая строка"""
    return ".".join("s" if step == STEP else str(step) for step in path)


def path_from_str(text: str) -> Path:
    """
    Разбирает путь из строки "0.s.1"

    Args:
        text: Строковое представление

    Returns:
        Кортеж шагов
    """
    if text == "":
        return ROOT
    steps = []
    for part in text.split("."):
        if part == "s":
            steps.append(STEP)
        elif part.isdigit():
            steps.append(int(part))
        else:
            raise FNHTError(f"malformed node path: {text!r}")
    return tuple(steps)


class MarkerKind(str, Enum):
    """Вид маркера: точка разрыва на рекуррентных или чистых состояниях"""
    RECURRENT = "r"
    PURE = "p"


@dataclass(frozen=True)
class FNHT:
    """
    Плоское вложенное дерево истории

    Узлы перечислены в прямом порядке обхода (это лексикографический
    порядок путей, так как STEP меньше всех номеров).
    """

    paths: Tuple[Path, ...]
    states: Tuple[int, ...]  # l_s
    pure: Tuple[int, ...]  # l_p
    recurrent: Tuple[int, ...]  # l_r
    max_even: int  # π_e, уровень корня

    @classmethod
    def from_labels(cls, labels: Mapping[Path, Tuple[int, int, int]], max_even: int) -> "FNHT":
        """
        Собирает дерево из отображения путь -> (l_s, l_p, l_r)

        Args:
            labels: Метки узлов
            max_even: Уровень корня

        Returns:
            Дерево с узлами в прямом порядке
        """
        ordered = sorted(labels)
        return cls(
            paths=tuple(ordered),
            states=tuple(labels[path][0] for path in ordered),
            pure=tuple(labels[path][1] for path in ordered),
            recurrent=tuple(labels[path][2] for path in ordered),
            max_even=max_even,
        )

    def __len__(self) -> int:
        return len(self.paths)

    @cached_property
    def index(self) -> Dict[Path, int]:
        return {path: i for i, path in enumerate(self.paths)}

    @cached_property
    def parents(self) -> Tuple[int, ...]:
        """Индекс родителя; -1 для корня и узлов без родителя в дереве"""
        return tuple(self.index.get(path[:-1], -1) if path else -1 for path in self.paths)

    @cached_property
    def children(self) -> Tuple[Tuple[int, ...], ...]:
        kids: List[List[int]] = [[] for _ in self.paths]
        for i, parent in enumerate(self.parents):
            if parent >= 0:
                kids[parent].append(i)
        return tuple(tuple(k) for k in kids)

    @cached_property
    def stepchild_flags(self) -> Tuple[bool, ...]:
        return tuple(is_stepchild(path) for path in self.paths)

    @cached_property
    def levels(self) -> Tuple[int, ...]:
        return tuple(level_of(path, self.max_even) for path in self.paths)

    def is_leaf(self, i: int) -> bool:
        return not self.children[i]

    def node(self, path: Path) -> int:
        try:
            return self.index[path]
        except KeyError:
            raise FNHTError(f"node not in tree: {path_to_str(path)!r}")

    def labels(self) -> Dict[Path, Tuple[int, int, int]]:
        return {
            path: (self.states[i], self.pure[i], self.recurrent[i])
            for i, path in enumerate(self.paths)
        }

    def relabel(self, states: Iterable[int], pure: Iterable[int], recurrent: Iterable[int]) -> "FNHT":
        """Дерево с тем же множеством узлов и новыми метками"""
        return FNHT(
            paths=self.paths,
            states=tuple(states),
            pure=tuple(pure),
            recurrent=tuple(recurrent),
            max_even=self.max_even,
        )

    @property
    def root_states(self) -> int:
        return self.states[self.index[ROOT]]


@dataclass(frozen=True)
class Marker:
    """Маркер (узел, вид)"""
    node: Path
    kind: MarkerKind


@dataclass(frozen=True)
class MFT:
    """Размеченное плоское дерево: FNHT, маркер и множество разметки Q_m"""
    base: FNHT
    marker: Marker
    marking: int


def max_even_for(max_priority: int) -> int:
    """Максимальный четный приоритет нормализованного Π с данным max Π"""
    return max_priority if max_priority % 2 == 0 else max_priority - 1


# ==============================================
# ВАЛИДАЦИЯ
# ==============================================

def validate_fnht(candidate: FNHT, state_universe: int, max_priority: int) -> List[str]:
    """
    Проверяет все ограничения FNHT

    Args:
        candidate: Запись в форме FNHT (не обязательно корректная)
        state_universe: Маска допустимых состояний
        max_priority: Максимальный приоритет π

    Returns:
        Список нарушенных ограничений; пустой список - дерево корректно
    """
    violations: List[str] = []

    def flag(message: str) -> None:
        if message not in violations:
            violations.append(message)

    if not candidate.paths:
        return ["tree empty"]
    if len(set(candidate.paths)) != len(candidate.paths):
        flag("duplicate node")
    if ROOT not in candidate.index:
        flag("tree has no root")
    if candidate.max_even != max_even_for(max_priority):
        flag("max even priority mismatch")

    for i, path in enumerate(candidate.paths):
        if any(step < 0 and step != STEP for step in path):
            flag("malformed node path")
            continue
        stepchild = candidate.stepchild_flags[i]
        kids = candidate.children[i]

        if path:
            parent = candidate.parents[i]
            if parent < 0:
                flag("tree not prefix closed")
            else:
                parent_step = candidate.stepchild_flags[parent]
                if parent_step and stepchild:
                    flag("stepchild has a stepchild")
                if not parent_step and not stepchild:
                    flag("natural child has a natural child")
            if not stepchild and path[-1] > 0 and path[:-1] + (path[-1] - 1,) not in candidate.index:
                flag("tree not order closed")

        if not kids and stepchild:
            if path:
                flag("non-root stepchild is a leaf")
            elif max_priority % 2 == 0:
                flag("root leaf requires odd max priority")

        s, p, r = candidate.states[i], candidate.pure[i], candidate.recurrent[i]
        if not s:
            flag("empty state label")
        if (s | p | r) & ~state_universe:
            flag("states outside universe")

        if stepchild:
            if p:
                flag("stepchild has pure states")
            union = 0
            disjoint = True
            for kid in kids:
                if candidate.stepchild_flags[kid]:
                    continue
                kid_states = candidate.states[kid]
                if kid_states & union or kid_states & r:
                    disjoint = False
                union |= kid_states
            if not disjoint:
                flag("stepchild partition not disjoint")
            if s != r | union:
                flag("stepchild states mismatch")
        else:
            if not p:
                flag("natural child without pure states")
            if p & r:
                flag("natural child pure and recurrent overlap")
            if s != p | r:
                flag("natural child states mismatch")
            for kid in kids:
                if candidate.stepchild_flags[kid] and candidate.states[kid] != p:
                    flag("stepchild states differ from parent pure states")

        if candidate.levels[i] < 2:
            flag("level below 2")

    return violations


def is_valid_fnht(candidate: FNHT, state_universe: int, max_priority: int) -> bool:
    return not validate_fnht(candidate, state_universe, max_priority)


def is_full_fnht(t: FNHT, state_universe: int) -> bool:
    """Дерево полное, если метка корня - все множество Q"""
    return t.root_states == state_universe


# ==============================================
# МАРКЕРЫ
# ==============================================

def marker_set(t: FNHT, marker: Marker) -> int:
    """
    Множество, связанное с маркером

    Args:
        t: Дерево
        marker: Маркер

    Returns:
        l_r(v̄) для вида r; l_p(v̄) для листа и вида p; иначе пусто
    """
    i = t.index.get(marker.node)
    if i is None:
        return 0
    if marker.kind is MarkerKind.RECURRENT:
        return t.recurrent[i]
    return t.pure[i] if t.is_leaf(i) else 0


def marker_slots(t: FNHT) -> List[Marker]:
    """Круговой порядок: узлы в прямом порядке, на каждом узле r перед p"""
    slots = []
    for path in t.paths:
        slots.append(Marker(path, MarkerKind.RECURRENT))
        slots.append(Marker(path, MarkerKind.PURE))
    return slots


def marker_candidates(t: FNHT) -> List[Tuple[Marker, int]]:
    """Маркеры с непустым множеством в круговом порядке"""
    result = []
    for marker in marker_slots(t):
        marked = marker_set(t, marker)
        if marked:
            result.append((marker, marked))
    return result


def next_marker(t: FNHT, current: Marker) -> Tuple[Marker, int]:
    """
    Следующий маркер в круговом порядке строго после текущего

    Args:
        t: Дерево (с новыми метками)
        current: Текущий маркер

    Returns:
        Маркер и его полное множество; может вернуть текущий маркер
    """
    slots = marker_slots(t)
    try:
        position = slots.index(current)
    except ValueError:
        raise FNHTError(f"marker not in tree: {path_to_str(current.node)!r}")
    for offset in range(1, len(slots) + 1):
        candidate = slots[(position + offset) % len(slots)]
        marked = marker_set(t, candidate)
        if marked:
            return candidate, marked
    raise FNHTError("no marker available")


def first_marker(t: FNHT) -> Tuple[Marker, int]:
    """Первый кандидат кругового порядка с полным множеством"""
    candidates = marker_candidates(t)
    if not candidates:
        raise FNHTError("no marker available")
    return candidates[0]


def is_full_marking(m: MFT) -> bool:
    """Разметка полная, если Q_m совпадает с множеством маркера"""
    return m.marking == marker_set(m.base, m.marker)


def validate_mft(m: MFT, state_universe: int, max_priority: int) -> List[str]:
    """
    Проверяет дерево, маркер и множество разметки

    Args:
        m: Размеченное дерево
        state_universe: Маска допустимых состояний
        max_priority: Максимальный приоритет π

    Returns:
        Список нарушений
    """
    violations = validate_fnht(m.base, state_universe, max_priority)
    i: Optional[int] = m.base.index.get(m.marker.node)
    if i is None:
        violations.append("marker node not in tree")
        return violations
    if not m.marking:
        violations.append("empty marking")
    if m.marker.kind is MarkerKind.PURE and not m.base.is_leaf(i):
        violations.append("pure marker on a non-leaf")
    if m.marking & ~marker_set(m.base, m.marker):
        violations.append("marking outside marked set")
    if violations:
        logger.debug(f"MFT нарушает ограничения: {violations}")
    return violations
