"""
Оракулы: принадлежность лассо-слов, пустота Бюхи, произведения

Все проверки строят явный достижимый граф и ищут в networkx SCC
цикл через нужное ребро. Вычисление SCC в networkx не рекурсивное.
"""
import json
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Tuple
import networkx as nx
from loguru import logger

from parity_complement.config import settings
from parity_complement.models.automata import (
    BuchiAutomaton, LassoWord, ParityAutomaton,
)
from parity_complement.services.complement_service import Phase1, successors
from parity_complement.services.fnht_service import CapExceededError


class OracleError(Exception):
    """Исключение для некорректных запросов к оракулам"""
    pass


class VerificationError(Exception):
    """Исключение для свидетелей, не прошедших самопроверку"""
    pass


@dataclass(frozen=True)
class EmptinessWitness:
    """Результат проверки пустоты: лассо и цикл состояний для непустого языка"""
    empty: bool
    lasso: Optional[LassoWord] = None
    cycle: Tuple[str, ...] = ()


Expand = Callable[[Hashable], Iterable[Tuple[Hashable, dict]]]


def _explore(roots: Iterable[Hashable], expand: Expand, cap: int, what: str) -> nx.DiGraph:
    """
    Строит достижимый граф обходом в ширину

    Args:
        roots: Начальные узлы
        expand: Функция узел -> (преемник, атрибуты ребра)
        cap: Лимит числа узлов
        what: Название графа для ошибки лимита

    Returns:
        Ориентированный граф; атрибуты параллельных ребер объединяются через merge
    """
    graph = nx.DiGraph()
    queue = deque()
    for root in roots:
        if root not in graph:
            graph.add_node(root)
            queue.append(root)
    while queue:
        node = queue.popleft()
        for target, data in expand(node):
            if target not in graph:
                if graph.number_of_nodes() >= cap:
                    logger.error(f"Превышен лимит узлов {what}: {cap}")
                    raise CapExceededError(what, cap)
                graph.add_node(target)
                queue.append(target)
            if graph.has_edge(node, target):
                _merge_edge(graph[node][target], data)
            else:
                graph.add_edge(node, target, **data)
    return graph


def _merge_edge(current: dict, data: dict) -> None:
    for key, value in data.items():
        if key == "accepting":
            current[key] = current.get(key, False) or value
        elif key == "letters":
            current[key] = current.get(key, ()) + value
        else:
            current.setdefault(key, value)


def _component_map(graph: nx.DiGraph) -> Dict[Hashable, int]:
    components = {}
    for number, component in enumerate(nx.strongly_connected_components(graph)):
        for node in component:
            components[node] = number
    return components


def _flagged_edge_in_cycle(graph: nx.DiGraph, flagged: Callable[[dict], bool]) -> Optional[Tuple[Hashable, Hashable]]:
    """Первое помеченное ребро, оба конца которого в одной SCC"""
    components = _component_map(graph)
    for source, target, data in graph.edges(data=True):
        if flagged(data) and components[source] == components[target]:
            return source, target
    return None


def _letter_indices(automaton, word: LassoWord) -> List[int]:
    return [automaton.letter_index(word.letter_at(position)) for position in range(word.positions)]


# ==============================================
# ПРИНАДЛЕЖНОСТЬ
# ==============================================

def parity_lasso_member(p: ParityAutomaton, w: LassoWord, cap: Optional[int] = None) -> bool:
    """
    Проверяет u·v^ω ∈ L(P)

    Произведение с позициями развертки; для каждого четного e ищется цикл
    по переходам с приоритетом ≤ e, содержащий переход с приоритетом e.

    Args:
        p: Автомат четности
        w: Лассо-слово
        cap: Лимит узлов произведения

    Returns:
        True если некоторый прогон принимающий
    """
    letters = _letter_indices(p, w)
    cap = cap or settings.product_state_cap

    def expand(node):
        position, state = node
        following = w.next_position(position)
        for target, priority in p.successors[letters[position]][state]:
            yield (following, target), {"priority": priority}

    graph = _explore(((0, q) for q in range(len(p.states)) if p.initial >> q & 1), expand, cap, "parity product")
    for even in sorted(e for e in p.priority_set if e % 2 == 0):
        view = nx.subgraph_view(graph, filter_edge=lambda u, v, e=even: graph[u][v]["priority"] <= e)
        if _flagged_edge_in_cycle(view, lambda data, e=even: data["priority"] == e):
            return True
    return False


def buchi_lasso_member(b: BuchiAutomaton, w: LassoWord, cap: Optional[int] = None) -> bool:
    """
    Проверяет u·v^ω ∈ L(B)

    Args:
        b: Автомат Бюхи
        w: Лассо-слово
        cap: Лимит узлов произведения

    Returns:
        True если некоторый прогон содержит бесконечно много принимающих переходов
    """
    letters = _letter_indices(b, w)
    cap = cap or settings.product_state_cap

    def expand(node):
        position, state = node
        following = w.next_position(position)
        for target, accepting in b.successors[letters[position]][state]:
            yield (following, target), {"accepting": accepting}

    graph = _explore(((0, q) for q in range(len(b.states)) if b.initial >> q & 1), expand, cap, "buchi product")
    return _flagged_edge_in_cycle(graph, lambda data: data["accepting"]) is not None


def complement_lasso_member(p: ParityAutomaton, w: LassoWord, cap: Optional[int] = None) -> bool:
    """
    Принадлежность слова языку дополнения без построения автомата

    Шаги subset_step, transfer_targets и mft_step выполняются на лету
    над парами (позиция, состояние дополнения).

    Args:
        p: Нормализованный автомат четности с π_e ≥ 2
        w: Лассо-слово
        cap: Лимит узлов

    Returns:
        True если дополнение принимает слово
    """
    letters = _letter_indices(p, w)
    cap = cap or settings.product_state_cap

    def expand(node):
        position, state = node
        following = w.next_position(position)
        for successor, accepting in successors(p, state, letters[position]):
            yield (following, successor), {"accepting": accepting}

    graph = _explore([(0, Phase1(p.initial))], expand, cap, "complement simulation")
    return _flagged_edge_in_cycle(graph, lambda data: data["accepting"]) is not None


# ==============================================
# ПУСТОТА
# ==============================================

def _letter_path(graph: nx.DiGraph, nodes: List[Hashable]) -> List[str]:
    return [graph[u][v]["letters"][0] for u, v in zip(nodes, nodes[1:])]


def buchi_emptiness(b: BuchiAutomaton) -> EmptinessWitness:
    """
    Проверяет пустоту языка автомата Бюхи

    Args:
        b: Автомат Бюхи

    Returns:
        Свидетель: пусто, либо лассо с принимающим циклом, проверенное оракулом
    """
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(b.states)))
    for source, letter, target, accepting in b.transitions:
        data = {"accepting": accepting, "letters": (b.alphabet[letter],)}
        if accepting:
            data["accepting_letter"] = b.alphabet[letter]
        if graph.has_edge(source, target):
            _merge_edge(graph[source][target], data)
        else:
            graph.add_edge(source, target, **data)

    initial = [q for q in range(len(b.states)) if b.initial >> q & 1]
    reachable = set(initial)
    for q in initial:
        reachable |= nx.descendants(graph, q)
    reach_graph = graph.subgraph(reachable)

    edge = _flagged_edge_in_cycle(reach_graph, lambda data: data["accepting"])
    if edge is None:
        logger.info(f"Язык пуст ({len(reachable)} достижимых состояний)")
        return EmptinessWitness(empty=True)

    source, target = edge
    components = _component_map(reach_graph)
    component = [q for q in reach_graph if components[q] == components[source]]
    lengths = {q: nx.shortest_path(reach_graph, q, source) for q in initial if nx.has_path(reach_graph, q, source)}
    stem = min(lengths.values(), key=len)
    back = nx.shortest_path(reach_graph.subgraph(component), target, source)

    prefix = _letter_path(reach_graph, stem)
    period = [reach_graph[source][target]["accepting_letter"]] + _letter_path(reach_graph, back)
    lasso = LassoWord(tuple(prefix), tuple(period))
    cycle = tuple(b.states[q] for q in [source] + back[:-1])

    if not buchi_lasso_member(b, lasso):
        logger.error(f"Свидетель непустоты не подтвержден: {lasso}")
        raise VerificationError(f"emptiness witness failed self-check: {lasso}")
    logger.info(f"Язык непуст, свидетель {lasso}")
    return EmptinessWitness(empty=False, lasso=lasso, cycle=cycle)


# ==============================================
# ПРЕОБРАЗОВАНИЯ И ПРОИЗВЕДЕНИЯ
# ==============================================

WAITING = "wait"


def parity_to_buchi(p: ParityAutomaton) -> BuchiAutomaton:
    """
    Автомат Бюхи того же языка через угадывание четного приоритета

    Режим ожидания копирует все переходы без приемки; прыжок фиксирует
    четное e; режим e оставляет переходы с приоритетом ≤ e и принимает
    ровно переходы с приоритетом e.

    Args:
        p: Автомат четности

    Returns:
        Автомат Бюхи; состояния - JSON пары [режим, состояние]
    """
    evens = sorted(e for e in p.priority_set if e % 2 == 0)
    modes = [WAITING] + evens
    names = {}
    for mode in modes:
        for q in p.states:
            names[(mode, q)] = json.dumps([mode, q], ensure_ascii=False)

    transitions = []
    for source, letter, target, priority in p.named_transitions():
        transitions.append((names[(WAITING, source)], letter, names[(WAITING, target)], False))
        for e in evens:
            if priority <= e:
                accepting = priority == e
                transitions.append((names[(WAITING, source)], letter, names[(e, target)], accepting))
                transitions.append((names[(e, source)], letter, names[(e, target)], accepting))

    initial = [names[(WAITING, q)] for i, q in enumerate(p.states) if p.initial >> i & 1]
    return BuchiAutomaton.build(list(names.values()), p.alphabet, initial, transitions)


def intersect_buchi(b1: BuchiAutomaton, b2: BuchiAutomaton, cap: Optional[int] = None) -> BuchiAutomaton:
    """
    Произведение автоматов Бюхи с флагом фазы

    Фаза 0 ждет принимающий переход первого множителя, фаза 1 - второго;
    принимающие переходы произведения - возвраты в фазу 0.

    Args:
        b1: Первый автомат
        b2: Второй автомат над тем же алфавитом
        cap: Лимит достижимых состояний

    Returns:
        Достижимая часть произведения, L = L(b1) ∩ L(b2)
    """
    if set(b1.alphabet) != set(b2.alphabet):
        raise OracleError("alphabet mismatch in intersection")
    cap = cap or settings.product_state_cap
    letter_map = [b2.letter_index(letter) for letter in b1.alphabet]

    def expand(node):
        q1, q2, flag = node
        for letter in range(len(b1.alphabet)):
            for t1, acc1 in b1.successors[letter][q1]:
                for t2, acc2 in b2.successors[letter_map[letter]][q2]:
                    if flag == 0:
                        if acc1 and acc2:
                            yield (t1, t2, 0), {"letter": letter, "accepting": True}
                        else:
                            yield (t1, t2, 1 if acc1 else 0), {"letter": letter, "accepting": False}
                    else:
                        yield (t1, t2, 0 if acc2 else 1), {"letter": letter, "accepting": acc2}

    roots = [
        (q1, q2, 0)
        for q1 in range(len(b1.states)) if b1.initial >> q1 & 1
        for q2 in range(len(b2.states)) if b2.initial >> q2 & 1
    ]
    # Ребра графа склеивают буквы, поэтому переходы собираются отдельным проходом
    graph = _explore(roots, lambda node: ((t, {}) for t, _ in expand(node)), cap, "buchi intersection")
    order = {node: i for i, node in enumerate(graph.nodes)}
    transitions = set()
    for node in graph.nodes:
        for target, data in expand(node):
            transitions.add((order[node], data["letter"], order[target], data["accepting"]))

    names = tuple(
        json.dumps([b1.states[q1], b2.states[q2], flag], ensure_ascii=False)
        for q1, q2, flag in graph.nodes
    )
    logger.debug(f"Произведение Бюхи: {len(names)} состояний, {len(transitions)} переходов")
    return BuchiAutomaton(
        states=names,
        alphabet=b1.alphabet,
        initial=(1 << len(roots)) - 1,
        transitions=tuple(sorted(transitions)),
    )
