"""
Независимые оракулы для тестов: перебор FNHT с фильтрацией валидатором
и наивная таблица правил букв β_t/γ_t
"""
from typing import Dict, FrozenSet, Iterator, List, Set, Tuple

from parity_complement.models.fnht import FNHT, STEP, max_even_for, validate_fnht
from parity_complement.utils.helpers import bits, nonempty_submasks, popcount, submasks

Nodes = List[Tuple[tuple, Tuple[int, int, int]]]


def _stepchild(path: tuple, level: int, bound: int) -> Iterator[Nodes]:
    for s in nonempty_submasks(bound):
        for r in submasks(s):
            for kids in _siblings(path, level, s, 0, 0):
                yield [(path, (s, 0, r))] + kids


def _siblings(parent: tuple, level: int, bound: int, index: int, used: int) -> Iterator[Nodes]:
    yield []
    if index >= popcount(bound):
        return
    for first in _natural(parent + (index,), level, bound & ~used):
        taken = first[0][1][0]
        for rest in _siblings(parent, level, bound, index + 1, used | taken):
            yield first + rest


def _natural(path: tuple, level: int, bound: int) -> Iterator[Nodes]:
    for s in nonempty_submasks(bound):
        for r in submasks(s):
            node = (path, (s, s & ~r, r))
            yield [node]
            if level - 2 >= 2:
                for sub in _stepchild(path + (STEP,), level - 2, s):
                    yield [node] + sub


def brute_force_fnhts(universe: int, max_priority: int) -> List[FNHT]:
    """Все кандидаты с ограниченной формой, прошедшие validate_fnht"""
    max_even = max_even_for(max_priority)
    found = []
    for nodes in _stepchild((), max_even, universe):
        candidate = FNHT.from_labels(dict(nodes), max_even)
        if not validate_fnht(candidate, universe, max_priority):
            found.append(candidate)
    return found


def _member(state: int, mask: int) -> bool:
    return bool(mask >> state & 1)


def naive_beta(t: FNHT, priorities: FrozenSet[int]) -> Dict[Tuple[int, int], Set[int]]:
    """β_t по правилам, проверяя каждую пару состояний отдельно"""
    states = list(bits(t.root_states))
    cells: Dict[Tuple[int, int], Set[int]] = {}
    for p in states:
        for q in states:
            found = set()
            for i, path in enumerate(t.paths):
                level = t.levels[i]
                if t.stepchild_flags[i]:
                    if level + 1 in priorities and _member(p, t.states[i]) and _member(q, t.states[i]):
                        found.add(level + 1)
                    kids = [j for j, other in enumerate(t.paths) if other[:-1] == path and len(other) == len(path) + 1]
                    for c in kids:
                        if _member(p, t.recurrent[i]) and _member(q, t.states[c]):
                            found.add(level)
                        for c2 in kids:
                            if t.paths[c][-1] < t.paths[c2][-1] and _member(p, t.states[c2]) and _member(q, t.states[c]):
                                found.add(level)
                else:
                    if _member(p, t.pure[i]) and _member(q, t.recurrent[i]):
                        found.add(level)
                    if _member(p, t.recurrent[i]) and _member(q, t.recurrent[i]):
                        found.add(level - 1)
                    if _member(p, t.pure[i]) and _member(q, t.pure[i]):
                        found.add(level - 1)
            if found:
                cells[(p, q)] = found
    return cells


def naive_gamma(t: FNHT, priorities: FrozenSet[int]) -> Dict[Tuple[int, int], Set[int]]:
    cells = naive_beta(t, priorities)
    states = list(bits(t.root_states))
    for p in states:
        for q in states:
            found = set(cells.get((p, q), set()))
            for i in range(len(t)):
                level = t.levels[i]
                if t.stepchild_flags[i]:
                    if _member(p, t.recurrent[i]) and _member(q, t.recurrent[i]):
                        found.add(level)
                elif level - 2 in priorities:
                    if _member(p, t.recurrent[i]) and _member(q, t.recurrent[i]):
                        found.add(level - 2)
                    if _member(p, t.pure[i]) and _member(q, t.pure[i]):
                        found.add(level - 2)
            if found:
                cells[(p, q)] = found
    return cells
