#!/usr/bin/env python3
"""
Скрипт для проверки конфигурации Parity Complement

Проверяет:
- Наличие .env файла
- Корректность лимитов и границ
- Директорию лог-файла
"""

import os
import sys
from pathlib import Path

# Добавляем корневую директорию в путь для импорта
root_dir = Path(__file__).parent.parent
sys.path.insert(0, str(root_dir))

from parity_complement.config import settings


def print_section(title: str):
    """Печатает заголовок секции"""
    print(f"\n{'='*50}")
    print(f"🔍 {title}")
    print('='*50)


def print_success(message: str):
    """Печатает сообщение об успехе"""
    print(f"✅ {message}")


def print_error(message: str):
    """Печатает сообщение об ошибке"""
    print(f"❌ {message}")


def print_warning(message: str):
    """Печатает предупреждение"""
    print(f"⚠️  {message}")


def check_env_file():
    """Проверяет наличие .env файла (необязателен)"""
    print_section("Проверка .env файла")
    env_path = root_dir / ".env"
    if env_path.exists():
        print_success(f".env файл найден: {env_path}")
    else:
        print_warning(f".env файл не найден: {env_path}, используются значения по умолчанию")


def print_settings():
    """Печатает действующие настройки"""
    print_section("Действующие настройки")
    for name, value in settings.model_dump().items():
        print(f"   {name} = {value!r}")


def check_limits() -> bool:
    """Проверяет лимиты и границы"""
    print_section("Проверка лимитов")
    try:
        settings.validate_required_settings()
    except ValueError as e:
        print_error(str(e))
        return False
    print_success("лимиты и границы корректны")
    if settings.hard_word_h is None:
        print_success("h трудных слов: |fnht(Q,π)| + 1")
    else:
        print_warning(f"h трудных слов переопределено: {settings.hard_word_h}")
    return True


def check_log_directory():
    """Проверяет директорию лог-файла"""
    print_section("Проверка логов")
    if not settings.log_file:
        print_warning("файловый лог отключен (LOG_FILE пуст)")
        return
    directory = Path(os.path.dirname(settings.log_file) or ".")
    if directory.exists():
        print_success(f"Директория логов: {directory} (существует)")
    else:
        print_warning(f"Директория логов: {directory} (будет создана автоматически)")


def main() -> int:
    """Основная функция проверки"""
    print("🧮 Parity Complement - Проверка конфигурации")
    print(f"📁 Рабочая директория: {root_dir}")

    check_env_file()
    print_settings()
    limits_ok = check_limits()
    check_log_directory()

    print_section("Итоговая сводка")
    if limits_ok:
        print_success("Конфигурация выглядит корректно!")
        print("\n🚀 Запустите проверки командой:")
        print("   ./scripts/run-checks.sh")
        return 0
    print_error("Найдены проблемы с конфигурацией!")
    return 1


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n\n⏹️  Проверка прервана пользователем")
