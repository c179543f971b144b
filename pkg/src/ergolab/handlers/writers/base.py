"""
Базовый класс для всех writer-ов результатов.
"""
from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any

from ergolab.services.fs import FileSystemService


class BaseWriter(ABC):
    """
    Абстрактный базовый класс для всех writer-ов, сохраняющих результаты
    эксперимента в файл конкретного формата.
    """

    suffix: str = ""
    """
    Что делает: Расширение файлов, которые пишет writer.
    Пример: ".csv"
    """

    def __init__(self, fs_service: FileSystemService):
        self._fs = fs_service
        """
        Что делает: Экземпляр сервиса для работы с файловой системой.
        """

    @abstractmethod
    def write(self, path: Path, payload: Any) -> None:
        """Основной метод, сериализующий `payload` в файл `path`."""
        pass
