"""
Этот модуль содержит FileSystemService, который инкапсулирует
все операции с локальной файловой системой.
"""
import json
import logging
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml


class FileSystemError(Exception):
    """Специальное исключение для ошибок файловой системы."""
    pass


class ConfigParseError(FileSystemError):
    """
    Ошибка разбора или валидации файла сценария.

    :param message: Описание ошибки.
    :param location: Позиция (строка, столбец), если парсер ее сообщил.
    """

    def __init__(self, message: str, location: Optional[Tuple[int, int]] = None):
        if location is not None:
            message = f"{message} (строка {location[0]}, столбец {location[1]})"
        super().__init__(message)
        self.location = location


CONFIG_SUFFIXES = (".json", ".yml", ".yaml")


class FileSystemService:
    """
    Сервис для инкапсуляции всех операций ввода-вывода, связанных
    с файловой системой. Предоставляет высокоуровневые методы для чтения
    сценариев и атомарной записи результатов.
    """

    def __init__(self) -> None:
        self._logger = logging.getLogger(__name__)

    def ensure_dir_exists(self, path: Path) -> None:
        """
        Гарантирует, что родительская директория для указанного пути файла
        существует. Если ее нет, она будет создана.

        :param path: Путь к файлу, для которого нужно создать родительскую директорию.
        """
        path.parent.mkdir(parents=True, exist_ok=True)

    def read_file(self, path: Path) -> str:
        """
        Читает текстовый файл и возвращает его содержимое как строку.

        :param path: Путь к текстовому файлу.
        :return: Содержимое файла.
        :raises FileSystemError: Если файл не найден или недоступен
        """
        try:
            with path.open("r", encoding="utf-8") as f:
                return f.read()
        except FileNotFoundError:
            raise FileSystemError(f"Файл не найден: {path}")
        except Exception as e:
            raise FileSystemError(f"Ошибка чтения файла {path}: {e}")

    def read_json(self, path: Path) -> Dict[str, Any]:
        """
        Читает JSON-файл и парсит его в Python-словарь.

        :param path: Путь к JSON-файлу.
        :return: Содержимое файла в виде словаря.
        :raises ConfigParseError: Если JSON невалиден или верхний уровень не объект;
            позиция ошибки передается в `location`.
        """
        content = self.read_file(path)
        try:
            data = json.loads(content)
        except json.JSONDecodeError as e:
            raise ConfigParseError(f"Невалидный JSON в файле {path}: {e.msg}", (e.lineno, e.colno))
        if not isinstance(data, dict):
            raise ConfigParseError(f"Верхний уровень JSON в файле {path} должен быть объектом", (1, 1))
        return data

    def read_yaml(self, path: Path) -> Dict[str, Any]:
        """
        Читает YAML-файл и парсит его в Python-словарь.

        :param path: Путь к YAML-файлу.
        :return: Содержимое файла в виде словаря.
        :raises ConfigParseError: Если файл пуст или YAML невалиден
        """
        content = self.read_file(path)
        try:
            data = yaml.safe_load(content)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            location = (mark.line + 1, mark.column + 1) if mark is not None else None
            raise ConfigParseError(f"Невалидный YAML в файле {path}: {getattr(e, 'problem', e)}", location)
        if not isinstance(data, dict):
            raise ConfigParseError(f"Пустой или невалидный YAML файл: {path}")
        return data

    def read_config(self, path: Path) -> Dict[str, Any]:
        """
        Читает файл сценария, выбирая парсер по расширению.

        :raises ConfigParseError: Неизвестное расширение или ошибка разбора.
        :raises FileSystemError: Если файл не найден.
        """
        suffix = path.suffix.lower()
        if suffix == ".json":
            return self.read_json(path)
        if suffix in (".yml", ".yaml"):
            return self.read_yaml(path)
        raise ConfigParseError(f"Неизвестный формат сценария '{suffix}': ожидается один из {CONFIG_SUFFIXES}")

    def list_configs(self, directory: Path) -> List[Path]:
        """
        Возвращает файлы сценариев директории в лексикографическом порядке.

        :raises FileSystemError: Если директория не существует.
        """
        if not directory.is_dir():
            raise FileSystemError(f"Директория сценариев не найдена: {directory}")
        return sorted(p for p in directory.iterdir() if p.is_file() and p.suffix.lower() in CONFIG_SUFFIXES)

    def validate_path_within_directory(self, path: Path, base_dir: Path) -> None:
        """
        Проверяет, что путь находится внутри указанной базовой директории.

        :param path: Путь для проверки.
        :param base_dir: Базовая директория, внутри которой должен находиться путь.
        :raises FileSystemError: Если путь выходит за пределы базовой директории.
        """
        try:
            path.resolve().relative_to(base_dir.resolve())
        except ValueError:
            raise FileSystemError(f"Путь '{path}' выходит за пределы директории результатов '{base_dir}'")

    def write_file(self, path: Path, content: str) -> None:
        """
        Атомарно записывает строковый контент в файл: содержимое пишется
        во временный файл той же директории, который затем переименовывается.

        :param path: Путь к целевому файлу.
        :param content: Строковый контент для записи.
        :raises FileSystemError: Если не удалось записать файл
        """
        try:
            self.ensure_dir_exists(path)
            fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                    f.write(content)
                os.replace(tmp_name, path)
            except BaseException:
                Path(tmp_name).unlink(missing_ok=True)
                raise
            self._logger.debug(f"Успешно записан файл: {path}")
        except Exception as e:
            raise FileSystemError(f"Ошибка записи файла {path}: {e}")
