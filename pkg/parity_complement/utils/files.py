"""
Чтение и запись JSON файлов автоматов, слов и отчетов
"""
import json
import os
from typing import Any, Type, TypeVar
from pydantic import BaseModel
from loguru import logger

from parity_complement.models.schemas import AutomatonFile

Schema = TypeVar("Schema", bound=BaseModel)


class FileFormatError(ValueError):
    """Исключение для нечитаемых или некорректных JSON файлов"""
    pass


def read_json(path: str) -> Any:
    """
    Читает JSON документ

    Args:
        path: Путь к файлу

    Returns:
        Разобранный документ
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Не удалось прочитать {path}: {e}")
        raise FileFormatError(f"cannot read {path}: {e}")


def load_model(path: str, schema: Type[Schema]) -> Schema:
    """Читает файл и валидирует его схемой pydantic"""
    return schema.model_validate(read_json(path))


def load_automaton(path: str):
    """Читает автомат четности или Бюхи из JSON файла"""
    return load_model(path, AutomatonFile).to_automaton()


def write_text(path: str, text: str) -> None:
    """Записывает текст, создавая родительские директории"""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.debug(f"Записан файл {path}")


def save_automaton(path: str, automaton) -> None:
    """Сохраняет автомат в каноническом JSON"""
    write_text(path, AutomatonFile.from_automaton(automaton).dump())


def save_model(path: str, model: BaseModel) -> None:
    """Сохраняет pydantic модель как JSON с отступами"""
    payload = model.model_dump(by_alias=True, exclude_none=True)
    write_text(path, json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
