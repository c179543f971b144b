"""
Этот модуль содержит реализацию JsonWriter, который отвечает
за запись сертификатов и манифеста в JSON.
"""
import json
from pathlib import Path
from typing import Any

import numpy as np

from .base import BaseWriter


def to_builtin(value: Any) -> Any:
    """Преобразует скаляры и массивы numpy во встроенные типы для json."""
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Объект типа {type(value).__name__} не сериализуется в JSON")


class JsonWriter(BaseWriter):
    """
    Writer JSON-документов с отступом 2 и сортировкой ключей.
    """

    suffix = ".json"

    def render(self, payload: Any) -> str:
        return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False, default=to_builtin) + "\n"

    def write(self, path: Path, payload: Any) -> None:
        self._fs.write_file(path, self.render(payload))
