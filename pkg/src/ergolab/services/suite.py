"""
Этот модуль содержит SuiteService, который выполняет все сценарии
директории и собирает сводку suite_summary.csv.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Optional

from ergolab.handlers.writers.csv import CsvWriter
from ergolab.models.results import ResultTable, SuiteRow, SuiteSummary
from .fs import FileSystemService
from .runner import ScenarioRunner

SUMMARY_FILE = "suite_summary.csv"
SUMMARY_COLUMNS = ["scenario", "experiment", "status", "checks_passed", "checks_total", "message"]


class SuiteService:
    """
    Сервис набора сценариев.

    Сценарии выполняются параллельно (по одному на поток), но каждый
    сценарий внутри выполняется последовательно. Сводка упорядочена по
    именам файлов, поэтому не зависит от числа потоков. Падение одного
    сценария записывается строкой со статусом "error" и не прерывает набор.
    """

    def __init__(self, fs_service: FileSystemService, runner: ScenarioRunner):
        self._fs = fs_service
        self._runner = runner
        self._csv = CsvWriter(fs_service)
        self._logger = logging.getLogger(__name__)

    def run(
            self,
            directory: Path,
            out_dir: Optional[Path] = None,
            jobs: int = 1,
            seed_override: Optional[int] = None,
    ) -> SuiteSummary:
        """
        Выполняет все сценарии директории.

        :param directory: Директория с файлами сценариев (.json, .yml, .yaml).
        :param out_dir: Корень результатов; сценарий пишет в <out_dir>/<имя файла>.
        :param jobs: Число параллельно выполняемых сценариев.
        :param seed_override: Зерно, заменяющее зерно каждого сценария.
        :return: Сводка со строкой на каждый сценарий.
        :raises FileSystemError: Если директория не существует.
        """
        root = out_dir if out_dir is not None else Path.cwd() / "results"
        paths = self._fs.list_configs(directory)
        self._logger.info(f"Запускаю набор из {len(paths)} сценариев в {directory}, потоков: {jobs}")

        def run_one(path: Path) -> SuiteRow:
            return self._run_one(path, root / path.stem, seed_override)

        if jobs <= 1:
            rows = [run_one(p) for p in paths]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(run_one, paths))

        summary_path = root / SUMMARY_FILE
        table = ResultTable(
            name="suite_summary",
            columns=SUMMARY_COLUMNS,
            rows=[[getattr(row, c) for c in SUMMARY_COLUMNS] for row in rows],
        )
        self._csv.write(summary_path, table)
        passed = sum(row.status == "pass" for row in rows)
        self._logger.info(f"Набор завершен: {passed} из {len(rows)} сценариев прошли, сводка в {summary_path}")
        return SuiteSummary(rows=rows, summary_path=str(summary_path))

    def _run_one(self, path: Path, out_dir: Path, seed_override: Optional[int]) -> SuiteRow:
        try:
            outcome = self._runner.run(path, out_dir=out_dir, seed_override=seed_override)
        except Exception as e:
            self._logger.error(f"Сценарий {path.name} завершился ошибкой: {e}")
            return SuiteRow(
                scenario=path.stem,
                experiment="",
                status="error",
                checks_passed=0,
                checks_total=0,
                message=f"{type(e).__name__}: {e}",
            )
        checks = outcome.result.checks
        failed = sorted(name for name, ok in checks.items() if not ok)
        return SuiteRow(
            scenario=outcome.result.scenario_id,
            experiment=outcome.result.experiment.value,
            status="fail" if failed else "pass",
            checks_passed=len(checks) - len(failed),
            checks_total=len(checks),
            message=";".join(failed),
        )
