"""
Тесты для JsonWriter.
"""
import json

import numpy as np
import pytest

from ergolab.handlers.writers.json import JsonWriter, to_builtin


class TestJsonWriter:
    """Тесты для JsonWriter."""

    def test_sorted_keys_and_newline(self, fs_service):
        """Тест: ключи отсортированы, отступ 2, в конце перевод строки."""
        text = JsonWriter(fs_service).render({"b": 1, "a": "μ"})
        assert text == '{\n  "a": "μ",\n  "b": 1\n}\n'

    def test_numpy_values(self, fs_service, temp_dir):
        """Тест: скаляры и массивы numpy сериализуются как встроенные типы."""
        writer = JsonWriter(fs_service)
        path = temp_dir / "certificates.json"
        writer.write(path, {"valid": np.bool_(True), "sup": np.float64(0.25), "curve": np.array([1.0, 2.0])})

        data = json.loads(path.read_text(encoding="utf-8"))
        assert data == {"valid": True, "sup": 0.25, "curve": [1.0, 2.0]}

    def test_unsupported_object(self):
        """Тест: произвольный объект не сериализуется."""
        with pytest.raises(TypeError):
            to_builtin(object())
