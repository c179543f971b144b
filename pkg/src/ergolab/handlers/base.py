"""
Этот модуль определяет базовый абстрактный класс для всех обработчиков экспериментов.
"""
from abc import ABC, abstractmethod
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, TypeVar

from ergolab.models.context import ExperimentContext
from ergolab.models.results import ExperimentResult
from ergolab.services.builder import Instance, ScenarioBuilder

R = TypeVar("R")


class BaseExperiment(ABC):
    """
    Абстрактный базовый класс (интерфейс) для всех обработчиков экспериментов.

    Каждый конкретный тип эксперимента (например, 'maximal-search', 'convergence')
    должен быть реализован в виде класса, наследующего BaseExperiment
    и реализующего метод `apply`.
    """

    def __init__(self, builder: ScenarioBuilder):
        """
        Инициализирует обработчик, внедряя сервис построения объектов.

        :param builder: Экземпляр сервиса ScenarioBuilder.
        """
        self._builder = builder

    @abstractmethod
    def apply(self, context: ExperimentContext) -> ExperimentResult:
        """
        Выполняет эксперимент.

        :param context: Объект ExperimentContext, содержащий сценарий и действующее зерно.
        :return: Результат, который runner запишет в директорию результатов.
        """
        pass

    def _instance(self, context: ExperimentContext, index: int = 0) -> Instance:
        return self._builder.build_instance(context.scenario, context.seed, index)

    def _map_instances(self, context: ExperimentContext, fn: Callable[[int], R]) -> List[R]:
        """
        Применяет `fn` к номерам экземпляров 0..instances−1, используя
        `params.workers` потоков; порядок результатов совпадает с порядком номеров.
        """
        params = context.scenario.params
        indices = range(params.instances)
        if params.workers == 1:
            return [fn(i) for i in indices]
        with ThreadPoolExecutor(max_workers=params.workers) as pool:
            return list(pool.map(fn, indices))
