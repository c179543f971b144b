"""
Главный модуль приложения ergolab, координирующий работу всех сервисов.
"""
import logging
from pathlib import Path
from typing import Dict, Optional

from ergolab.core.algebra import AlgebraElement
from ergolab.core.orlicz import DEFAULT_LUXEMBURG_TOL, norm_table, orlicz_from_name
from ergolab.models.results import SuiteSummary
from ergolab.services.builder import ScenarioBuilder
from ergolab.services.fs import FileSystemService
from ergolab.services.runner import RunOutcome, ScenarioRunner
from ergolab.services.suite import SuiteService
from ergolab.services.template import TemplateService


class ErgolabApp:
    """
    Главный класс приложения ergolab.

    Отвечает за инициализацию всех сервисов и запуск сценариев,
    наборов сценариев и таблицы норм.
    """

    def __init__(self, verbose: bool = False) -> None:
        """
        Инициализирует приложение и сервисы.

        :param verbose: Включить подробное логирование
        """
        self.logger = logging.getLogger(__name__)
        self._setup_logging(verbose)

        # Инициализация сервисов
        self._fs = FileSystemService()
        self._builder = ScenarioBuilder()
        self._runner = ScenarioRunner(self._fs, self._builder, TemplateService())
        self._suite = SuiteService(self._fs, self._runner)

    def run(self, scenario_path: Path, out_dir: Optional[Path] = None, seed: Optional[int] = None) -> RunOutcome:
        """
        Выполняет один сценарий.

        :param scenario_path: Путь к файлу сценария
        :param out_dir: Директория результатов (по умолчанию ./results/<id>)
        :param seed: Зерно, заменяющее зерно сценария
        """
        self.logger.info(f"Запускаю ergolab для сценария: {scenario_path}")
        return self._runner.run(scenario_path, out_dir=out_dir, seed_override=seed)

    def suite(
        self,
        directory: Path,
        out_dir: Optional[Path] = None,
        jobs: int = 1,
        seed: Optional[int] = None,
    ) -> SuiteSummary:
        """
        Выполняет все сценарии директории и пишет suite_summary.csv.

        :param directory: Директория сценариев
        :param out_dir: Корень результатов (по умолчанию ./results)
        :param jobs: Число параллельных сценариев
        :param seed: Зерно, заменяющее зерно каждого сценария
        """
        return self._suite.run(directory, out_dir=out_dir, jobs=jobs, seed_override=seed)

    def norms(self, element_path: Path, phi_name: str) -> Dict[str, object]:
        """
        Читает сериализованный элемент и возвращает его таблицу норм.

        :param element_path: JSON вида {"blocks": ..., "dims": ..., "weights": ...}
        :param phi_name: Имя функции Орлича, например "p:2"
        """
        phi = orlicz_from_name(phi_name)
        element = AlgebraElement.from_dict(self._fs.read_json(element_path))
        self.logger.debug(f"Считаю нормы элемента {element!r} для Φ = {phi.name}")
        return norm_table(element, phi, DEFAULT_LUXEMBURG_TOL)

    def _setup_logging(self, verbose: bool) -> None:
        """
        Настраивает систему логирования.

        :param verbose: Если True, устанавливает уровень DEBUG, иначе INFO
        """
        level = logging.DEBUG if verbose else logging.INFO
        logging.basicConfig(
            level=level,
            format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )
