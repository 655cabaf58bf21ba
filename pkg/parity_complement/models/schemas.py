"""
Pydantic схемы для файловых форматов и отчетов
"""
import json
from typing import Dict, List, Literal, Optional, Union
from pydantic import BaseModel, ConfigDict, Field, model_validator

from parity_complement.models.automata import (
    AutomatonError, BuchiAutomaton, LassoWord, ParityAutomaton,
)
from parity_complement.models.fnht import (
    FNHT, MFT, Marker, MarkerKind, path_from_str, path_to_str,
)
from parity_complement.utils.helpers import mask_of, names_of


# Базовые схемы
class StrictSchema(BaseModel):
    """Базовая схема: неизвестные поля запрещены"""

    model_config = ConfigDict(extra="forbid", populate_by_name=True)


# ==============================================
# АВТОМАТЫ
# ==============================================

class TransitionRecord(StrictSchema):
    """Переход автомата в файле"""
    source: str = Field(..., alias="from")
    letter: str
    to: str
    priority: Optional[int] = None
    accepting: Optional[bool] = None


class AutomatonFile(StrictSchema):
    """Файл автомата четности или Бюхи"""
    kind: Literal["parity", "buchi"]
    states: List[str] = Field(..., min_length=1)
    initial: List[str] = Field(..., min_length=1)
    alphabet: List[str]
    transitions: List[TransitionRecord] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_consistency(self):
        """Проверяет поля переходов по виду автомата и дубликаты"""
        if len(set(self.states)) != len(self.states):
            raise ValueError("duplicate state ids")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise ValueError("duplicate letter ids")
        seen = set()
        for record in self.transitions:
            key = (record.source, record.letter, record.to)
            if key in seen:
                raise ValueError(f"duplicate transition: {key}")
            seen.add(key)
            if self.kind == "parity" and (record.priority is None or record.accepting is not None):
                raise ValueError(f"parity transition needs exactly 'priority': {key}")
            if self.kind == "buchi" and (record.accepting is None or record.priority is not None):
                raise ValueError(f"buchi transition needs exactly 'accepting': {key}")
        return self

    def to_automaton(self) -> Union[ParityAutomaton, BuchiAutomaton]:
        """
        Строит автомат из файла

        Returns:
            ParityAutomaton или BuchiAutomaton
        """
        if self.kind == "parity":
            return ParityAutomaton.build(
                self.states, self.alphabet, self.initial,
                [(r.source, r.letter, r.to, r.priority) for r in self.transitions],
            )
        return BuchiAutomaton.build(
            self.states, self.alphabet, self.initial,
            [(r.source, r.letter, r.to, r.accepting) for r in self.transitions],
        )

    @classmethod
    def from_automaton(cls, automaton: Union[ParityAutomaton, BuchiAutomaton]) -> "AutomatonFile":
        """Каноническая форма: переходы по (источник, буква, цель) в порядке индексов"""
        parity = isinstance(automaton, ParityAutomaton)
        records = []
        for source, letter, target, label in sorted(automaton.transitions):
            record = {
                "from": automaton.states[source],
                "letter": automaton.alphabet[letter],
                "to": automaton.states[target],
            }
            record["priority" if parity else "accepting"] = label
            records.append(TransitionRecord.model_validate(record))
        return cls(
            kind="parity" if parity else "buchi",
            states=list(automaton.states),
            initial=names_of(automaton.initial, automaton.states),
            alphabet=list(automaton.alphabet),
            transitions=records,
        )

    def dump(self) -> str:
        """Канонический JSON текст"""
        payload = self.model_dump(by_alias=True, exclude_none=True)
        return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


# ==============================================
# ДЕРЕВЬЯ
# ==============================================

def label_of(mask: int, names: List[str]) -> List[str]:
    """Метка как отсортированный массив идентификаторов состояний"""
    return sorted(names_of(mask, names))


class NodeRecord(StrictSchema):
    path: str
    states: List[str]
    pure: List[str]
    recurrent: List[str]


class FNHTFile(StrictSchema):
    """FNHT: узлы как строки путей, метки как массивы состояний"""
    max_even: int
    nodes: List[NodeRecord]

    @classmethod
    def from_fnht(cls, t: FNHT, names: List[str]) -> "FNHTFile":
        return cls(
            max_even=t.max_even,
            nodes=[
                NodeRecord(
                    path=path_to_str(path),
                    states=label_of(t.states[i], names),
                    pure=label_of(t.pure[i], names),
                    recurrent=label_of(t.recurrent[i], names),
                )
                for i, path in enumerate(t.paths)
            ],
        )

    def to_fnht(self, names: List[str]) -> FNHT:
        ids = {name: i for i, name in enumerate(names)}

        def encode(labels: List[str]) -> int:
            try:
                return mask_of(ids[name] for name in labels)
            except KeyError as e:
                raise AutomatonError(f"unknown state in tree: {e}")

        return FNHT.from_labels(
            {
                path_from_str(node.path): (encode(node.states), encode(node.pure), encode(node.recurrent))
                for node in self.nodes
            },
            self.max_even,
        )


class MarkerRecord(StrictSchema):
    node: str
    kind: Literal["r", "p"]


class MFTFile(StrictSchema):
    """MFT: дерево, маркер и множество разметки"""
    tree: FNHTFile
    marker: MarkerRecord
    marking: List[str]

    @classmethod
    def from_mft(cls, m: MFT, names: List[str]) -> "MFTFile":
        return cls(
            tree=FNHTFile.from_fnht(m.base, names),
            marker=MarkerRecord(node=path_to_str(m.marker.node), kind=m.marker.kind.value),
            marking=label_of(m.marking, names),
        )

    def to_mft(self, names: List[str]) -> MFT:
        ids = {name: i for i, name in enumerate(names)}
        return MFT(
            base=self.tree.to_fnht(names),
            marker=Marker(path_from_str(self.marker.node), MarkerKind(self.marker.kind)),
            marking=mask_of(ids[name] for name in self.marking),
        )


def subset_key(mask: int, names: List[str]) -> str:
    """Имя состояния первой фазы: "S:{q1,q2}" """
    return "S:{" + ",".join(label_of(mask, names)) + "}"


def mft_key(m: MFT, names: List[str]) -> str:
    """Имя состояния второй фазы: "M:" и компактный JSON дерева"""
    payload = MFTFile.from_mft(m, names).model_dump()
    return "M:" + json.dumps(payload, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


# ==============================================
# БУКВЫ ПОЛНОГО АВТОМАТА И ФАЙЛЫ СЛОВ
# ==============================================

class LetterMatrixFile(StrictSchema):
    """Буква Q×Q → 2^Π: {"matrix": {"p,q": [приоритеты]}}"""
    matrix: Dict[str, List[int]]


class WordFile(StrictSchema):
    """Лассо-слово над реестром букв файла автомата"""
    letters: Dict[str, LetterMatrixFile] = Field(default_factory=dict)
    prefix: List[str] = Field(default_factory=list)
    period: List[str] = Field(..., min_length=1)

    def to_word(self) -> LassoWord:
        return LassoWord(tuple(self.prefix), tuple(self.period))


# ==============================================
# ОТЧЕТЫ
# ==============================================

class Counterexample(BaseModel):
    prefix: List[str]
    period: List[str]
    in_parity: bool
    in_complement: bool


class CorrectnessReport(BaseModel):
    """Отчет проверки дополнения на одном автомате"""
    states: int
    letters: int
    priorities: List[int]
    phase1_states: int
    phase2_states: int
    product_empty: bool
    words_checked: int
    counterexamples: List[Counterexample] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.product_empty and not self.counterexamples


class TightnessReport(BaseModel):
    """Подсчеты для оценки точности конструкции"""
    n: int
    max_priority: int
    subsets: int
    mfts: int
    fnhts: int
    full_fnhts: int
    full_marking_mfts: int
    ratio: float
    bound: int
    violations: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def upper_bound_states(self) -> int:
        """Оценка сверху на число состояний дополнения |2^Q| + |mft|"""
        return self.subsets + self.mfts


class HardWordReport(BaseModel):
    """Результат проверки трудного слова для одного полного дерева"""
    tree_index: int
    h: int
    rejected_by_parity: bool
    accepted_by_complement: bool
    transfer_reaches_tree: bool
    fixpoint: bool
    acceptance: Literal["periodic", "per_period", "none"]
    blocked_at: Optional[int] = None
