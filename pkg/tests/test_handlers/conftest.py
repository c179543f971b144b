"""
Fixtures для тестов обработчиков экспериментов.
"""
from typing import Any, Callable, Dict

import pytest

from ergolab.models.context import ExperimentContext
from ergolab.models.scenario import Scenario


@pytest.fixture
def make_context(base_scenario) -> Callable[..., ExperimentContext]:
    """
    Возвращает функцию, которая строит ExperimentContext из базового
    сценария, заменяя указанные поля верхнего уровня.
    """

    def make(**overrides: Any) -> ExperimentContext:
        data: Dict[str, Any] = {**base_scenario, **overrides}
        scenario = Scenario(**data)
        return ExperimentContext(scenario=scenario, seed=scenario.seed)

    return make
