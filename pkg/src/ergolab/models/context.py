"""
Этот модуль содержит модель ExperimentContext, которая используется для
передачи всей необходимой информации в обработчики экспериментов.
"""
from pathlib import Path
from typing import Optional

from pydantic import BaseModel

from .scenario import Scenario


class ExperimentContext(BaseModel):
    """
    Контекст выполнения одного сценария.

    Содержит все, что нужно обработчику, чтобы построить объекты
    и выполнить эксперимент.
    """
    scenario: Scenario
    """
    Что делает: Провалидированный сценарий.
    Форма: Объект `ergolab.models.scenario.Scenario`.
    """
    seed: int
    """
    Что делает: Действующее зерно (из сценария или из ERGOLAB_SEED).
    Форма: Целое >= 0.
    """
    source_path: Optional[Path] = None
    """
    Что делает: Путь к файлу сценария, если сценарий прочитан с диска.
    Форма: Объект `pathlib.Path` или None.
    """
