"""
Вспомогательные функции: множества состояний как битовые маски
"""
import itertools
from typing import Iterable, Iterator, List, Sequence, Tuple


def mask_of(indices: Iterable[int]) -> int:
    """
    Собирает битовую маску из индексов

    Args:
        indices: Индексы элементов

    Returns:
        Маска с установленными битами
    """
    mask = 0
    for index in indices:
        mask |= 1 << index
    return mask


def bits(mask: int) -> Iterator[int]:
    """
    Перебирает индексы установленных битов по возрастанию

    Args:
        mask: Битовая маска

    Returns:
        Итератор индексов
    """
    index = 0
    while mask:
        if mask & 1:
            yield index
        mask >>= 1
        index += 1


def popcount(mask: int) -> int:
    """Число элементов множества"""
    return bin(mask).count("1")


def full_mask(size: int) -> int:
    """Маска множества {0, ..., size-1}"""
    return (1 << size) - 1


def submasks(mask: int) -> Iterator[int]:
    """
    Перебирает все подмножества маски по возрастанию числового значения,
    включая пустое

    Args:
        mask: Битовая маска

    Returns:
        Итератор подмасок
    """
    positions = list(bits(mask))
    for combo in range(1 << len(positions)):
        yield mask_of(positions[i] for i in range(len(positions)) if combo >> i & 1)


def nonempty_submasks(mask: int) -> Iterator[int]:
    """Все непустые подмножества маски по возрастанию"""
    for sub in submasks(mask):
        if sub:
            yield sub


def ordered_partitions(mask: int) -> Iterator[Tuple[int, ...]]:
    """
    Перебирает упорядоченные разбиения множества на непустые блоки

    Args:
        mask: Разбиваемое множество (непустое)

    Returns:
        Итератор кортежей попарно непересекающихся блоков
    """
    if not mask:
        yield ()
        return
    for block in nonempty_submasks(mask):
        for rest in ordered_partitions(mask & ~block):
            yield (block,) + rest


def format_mask(mask: int, names: Sequence[str]) -> str:
    """
    Форматирует множество как "{a,b}"

    Args:
        mask: Битовая маска
        names: Имена элементов по индексам

    Returns:
        Строковое представление
    """
    return "{" + ",".join(names[i] for i in bits(mask)) + "}"


def names_of(mask: int, names: Sequence[str]) -> List[str]:
    """Имена элементов маски в порядке индексов"""
    return [names[i] for i in bits(mask)]


def bounded_lassos(
    alphabet: Sequence[str], prefix_bound: int, period_bound: int
) -> Iterator[Tuple[Tuple[str, ...], Tuple[str, ...]]]:
    """
    Перебирает все пары (префикс, период) в пределах границ

    Args:
        alphabet: Буквы в каноническом порядке
        prefix_bound: Максимальная длина префикса
        period_bound: Максимальная длина периода (не меньше 1)

    Returns:
        Итератор пар кортежей букв
    """
    for prefix_length in range(prefix_bound + 1):
        for prefix in itertools.product(alphabet, repeat=prefix_length):
            for period_length in range(1, period_bound + 1):
                for period in itertools.product(alphabet, repeat=period_length):
                    yield prefix, period
