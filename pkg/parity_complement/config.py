"""
Конфигурация Parity Complement

Этот файл содержит только структуру настроек и безопасные значения по умолчанию.
Переопределения задаются переменными окружения или .env файлом.
"""
import os
from typing import Optional
from pydantic import ConfigDict
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Настройки Parity Complement"""

    model_config = ConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore"  # Игнорировать дополнительные поля
    )

    # ==============================================
    # ОСНОВНЫЕ НАСТРОЙКИ
    # ==============================================
    app_mode: str = "development"
    log_level: str = "INFO"
    log_file: str = "logs/parity_complement.log"  # Пустая строка отключает файл

    # ==============================================
    # ОГРАНИЧЕНИЯ РЕСУРСОВ
    # Превышение любого лимита - явная ошибка, а не обрезка
    # ==============================================
    enumeration_cap: int = 1_000_000  # FNHT/MFT на одно перечисление
    complement_state_cap: int = 500_000  # Достижимые состояния дополнения
    product_state_cap: int = 2_000_000  # Узлы произведений и оракулов

    # ==============================================
    # ТРУДНЫЕ СЛОВА
    # ==============================================
    hard_word_h: Optional[int] = None  # None: |fnht(Q,π)| + 1

    # ==============================================
    # ПРОВЕРКА КОРРЕКТНОСТИ
    # ==============================================
    fuzz_seed: int = 20141
    random_automata_count: int = 200
    correctness_prefix_bound: int = 2
    correctness_period_bound: int = 3

    # ==============================================
    # ВАЛИДАЦИЯ НАСТРОЕК
    # ==============================================
    def validate_required_settings(self) -> None:
        """Проверяет что лимиты и границы положительны"""
        positive_fields = {
            'enumeration_cap': 'лимит перечисления',
            'complement_state_cap': 'лимит состояний дополнения',
            'product_state_cap': 'лимит узлов произведения',
            'random_automata_count': 'размер случайного семейства',
            'correctness_period_bound': 'граница длины периода',
        }

        invalid_fields = []
        for field, description in positive_fields.items():
            if getattr(self, field, 0) <= 0:
                invalid_fields.append(f"{field} ({description})")

        if self.correctness_prefix_bound < 0:
            invalid_fields.append("correctness_prefix_bound (граница длины префикса)")
        if self.hard_word_h is not None and self.hard_word_h < 2:
            invalid_fields.append("hard_word_h (должно быть не меньше 2)")

        if invalid_fields:
            raise ValueError(
                "Некорректные настройки:\n" +
                "\n".join([f"- {field}" for field in invalid_fields]) +
                "\n\nПроверьте переменные окружения и файл .env."
            )


# Глобальный экземпляр настроек
settings = Settings()

# Проверяем настройки при импорте
# (только в продакшн режиме, чтобы не мешать разработке)
if os.getenv("APP_MODE", "development") == "production":
    settings.validate_required_settings()
