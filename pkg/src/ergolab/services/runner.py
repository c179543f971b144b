"""
Этот модуль содержит ScenarioRunner — сервис-оркестратор, который
загружает сценарий, вызывает нужный обработчик эксперимента и
записывает директорию результатов.
"""
import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import ValidationError

from ergolab import __version__
from ergolab.core.errors import CertificationError
from ergolab.core.maximal import MaximalCertificate, Theorem, verify_certificate
from ergolab.core.sampling import RNG_ALGORITHM
from ergolab.core.weights import unit_weights
from ergolab.handlers.average_trace import AverageTraceExperiment
from ergolab.handlers.base import BaseExperiment
from ergolab.handlers.buem_probe import BuemProbeExperiment
from ergolab.handlers.convergence import ConvergenceExperiment
from ergolab.handlers.maximal_search import MaximalSearchExperiment
from ergolab.handlers.norm_table import NormTableExperiment
from ergolab.handlers.writers.base import BaseWriter
from ergolab.handlers.writers.csv import CsvWriter
from ergolab.handlers.writers.json import JsonWriter
from ergolab.handlers.writers.svg import SvgWriter
from ergolab.models.context import ExperimentContext
from ergolab.models.experiment import ExperimentType, OutputFormat
from ergolab.models.results import ExperimentResult, Manifest
from ergolab.models.scenario import Scenario
from .builder import ScenarioBuilder
from .fs import ConfigParseError, FileSystemService
from .template import TemplateService

CERTIFICATES_FILE = "certificates.json"
MANIFEST_FILE = "manifest.json"


@dataclass
class RunOutcome:
    """Итог выполнения одного сценария."""
    result: ExperimentResult
    output_dir: Path
    manifest: Manifest
    files: List[str] = field(default_factory=list)


class ScenarioRunner:
    """
    Главный сервис выполнения сценариев.
    Отвечает за весь жизненный цикл сценария: чтение и валидацию конфигурации,
    выбор обработчика по типу эксперимента, запись таблиц, сертификатов,
    графиков и манифеста.

    Файлы пишутся только после завершения эксперимента, поэтому сценарий,
    который не прошел валидацию или упал, не оставляет директории результатов.
    """

    def __init__(
            self,
            fs_service: FileSystemService,
            builder: ScenarioBuilder,
            template_service: TemplateService,
    ):
        self._fs = fs_service
        self._builder = builder
        self._logger = logging.getLogger(__name__)

        self._handlers: Dict[ExperimentType, BaseExperiment] = {
            ExperimentType.AVERAGE_TRACE: AverageTraceExperiment(builder),
            ExperimentType.MAXIMAL_SEARCH: MaximalSearchExperiment(builder),
            ExperimentType.BUEM_PROBE: BuemProbeExperiment(builder),
            ExperimentType.CONVERGENCE: ConvergenceExperiment(builder),
            ExperimentType.NORM_TABLE: NormTableExperiment(builder),
        }
        self._writers: Dict[OutputFormat, BaseWriter] = {
            OutputFormat.CSV: CsvWriter(fs_service),
            OutputFormat.JSON: JsonWriter(fs_service),
            OutputFormat.SVG: SvgWriter(fs_service, template_service),
        }

    def load_scenario(self, path: Path) -> Scenario:
        """
        Читает и валидирует файл сценария.

        :raises ConfigParseError: Если файл не парсится или не проходит валидацию.
        """
        self._logger.debug(f"Загружаю сценарий из: {path}")
        data = self._fs.read_config(path)
        try:
            return Scenario.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            loc = ".".join(str(part) for part in first["loc"]) or "<корень>"
            self._logger.error(f"Невалидный сценарий в {path}: {e}")
            raise ConfigParseError(
                f"Ошибка валидации сценария {path}: поле '{loc}': {first['msg']} (всего ошибок: {e.error_count()})"
            ) from e

    def run(self, path: Path, out_dir: Optional[Path] = None, seed_override: Optional[int] = None) -> RunOutcome:
        """
        Загружает сценарий и выполняет его.

        :param path: Путь к файлу сценария.
        :param out_dir: Директория результатов; по умолчанию ./results/<id>.
        :param seed_override: Зерно, заменяющее зерно сценария (ERGOLAB_SEED).
        """
        scenario = self.load_scenario(path)
        target = out_dir if out_dir is not None else Path.cwd() / "results" / scenario.id
        return self.run_scenario(scenario, target, seed_override, source_path=path)

    def run_scenario(
            self,
            scenario: Scenario,
            out_dir: Path,
            seed_override: Optional[int] = None,
            source_path: Optional[Path] = None,
    ) -> RunOutcome:
        """
        Выполняет провалидированный сценарий и пишет директорию результатов.

        :raises HypothesisViolationError: Если сценарий нарушает гипотезу теоремы.
        :raises CertificationError: Если сохраненный сертификат не прошел
            повторную проверку после чтения с диска.
        """
        if seed_override is not None:
            scenario = scenario.with_seed(seed_override)
        experiment = scenario.experiment
        context = ExperimentContext(scenario=scenario, seed=scenario.seed, source_path=source_path)
        self._logger.info(f"Запускаю сценарий '{scenario.id}' ({experiment.value}), зерно {scenario.seed}")

        started = time.perf_counter()
        result = self._handlers[experiment].apply(context)
        wall_time = time.perf_counter() - started

        files = self._write_results(result, scenario, out_dir)
        manifest = Manifest(
            scenario=scenario.model_dump(mode="json"),
            library_version=__version__,
            rng_algorithm=RNG_ALGORITHM,
            seed=scenario.seed,
            wall_time_seconds=wall_time,
            files=sorted(files + [MANIFEST_FILE]),
            checks=result.checks,
            summary=result.summary,
        )
        self._write(OutputFormat.JSON, out_dir / MANIFEST_FILE, out_dir, manifest.model_dump())

        if result.certificates:
            self._reverify(context, out_dir / CERTIFICATES_FILE)

        for name, ok in result.checks.items():
            if not ok:
                self._logger.warning(f"Сценарий '{scenario.id}': проверка '{name}' не пройдена")
        self._logger.info(
            f"Сценарий '{scenario.id}' завершен за {wall_time:.2f} с, результаты в {out_dir}"
        )
        return RunOutcome(result=result, output_dir=out_dir, manifest=manifest, files=manifest.files)

    def _write(self, fmt: OutputFormat, path: Path, out_dir: Path, payload: object) -> str:
        self._fs.validate_path_within_directory(path, out_dir)
        self._writers[fmt].write(path, payload)
        self._logger.debug(f"Записан файл: {path}")
        return path.name

    def _write_results(self, result: ExperimentResult, scenario: Scenario, out_dir: Path) -> List[str]:
        files = []
        for table in result.tables:
            files.append(self._write(OutputFormat.CSV, out_dir / f"{table.name}.csv", out_dir, table))
        if result.certificates:
            payload = {"certificates": result.certificates}
            files.append(self._write(OutputFormat.JSON, out_dir / CERTIFICATES_FILE, out_dir, payload))
        if scenario.params.plots:
            for plot in result.plots:
                files.append(self._write(OutputFormat.SVG, out_dir / f"{plot.name}.svg", out_dir, plot))
        return files

    def _reverify(self, context: ExperimentContext, path: Path) -> None:
        """
        Читает записанные сертификаты и проверяет каждый заново: пересчитывает
        флаг валидности по сохраненным числам и прогоняет независимый
        верификатор на перестроенном экземпляре.

        :raises CertificationError: При расхождении с записанным результатом.
        """
        data = json.loads(self._fs.read_file(path))
        instances = {}
        for entry in data["certificates"]:
            cert = MaximalCertificate.from_dict(entry)
            if cert.is_valid != entry["valid"]:
                raise CertificationError(
                    f"Сертификат экземпляра {entry['instance']} после чтения дал valid = {cert.is_valid}",
                    defects={"trace_defect": cert.trace_defect, "achieved_sup": cert.achieved_sup},
                )
            index = int(entry["instance"])
            if index not in instances:
                instances[index] = self._builder.build_instance(context.scenario, context.seed, index)
            instance = instances[index]
            weights = None
            if cert.theorem == Theorem.WEIGHTED:
                weights = instance.left if instance.left is not None else unit_weights(instance.algebra)
            check = verify_certificate(cert, instance.operator, instance.element, weights)
            if check.valid != entry["reverified"]:
                raise CertificationError(
                    f"Повторная проверка сертификата экземпляра {index} дала {check.valid}",
                    witness=cert.projection,
                    defects={"trace_defect": check.trace_defect, "achieved_sup": check.achieved_sup},
                )
        self._logger.debug(f"Сертификаты из {path} перепроверены: {len(data['certificates'])}")
