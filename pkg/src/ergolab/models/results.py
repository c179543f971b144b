"""
Этот модуль содержит модели результатов экспериментов, манифеста
и сводки набора сценариев.
"""
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field

from .experiment import ExperimentType


class ResultTable(BaseModel):
    """
    Таблица результатов, записываемая в CSV.
    """
    name: str
    """
    Что делает: Имя файла без расширения.
    Пример: "certificates"
    """
    columns: List[str]
    rows: List[List[Any]] = Field(default_factory=list)


class PlotSeries(BaseModel):
    label: str
    points: List[Tuple[float, float]]


class PlotSpec(BaseModel):
    """
    Описание графика, который рендерится в SVG.
    """
    name: str
    title: str
    x_label: str
    y_label: str
    series: List[PlotSeries]
    log_x: bool = False
    log_y: bool = False


class ExperimentResult(BaseModel):
    """
    Результат выполнения одного сценария до записи на диск.
    """
    scenario_id: str
    experiment: ExperimentType
    tables: List[ResultTable] = Field(default_factory=list)
    certificates: List[Dict[str, Any]] = Field(default_factory=list)
    """
    Что делает: Сертификаты максимальных неравенств в сериализованном виде.
    Форма: Список словарей `MaximalCertificate.to_dict()` с полями instance и eps.
    """
    plots: List[PlotSpec] = Field(default_factory=list)
    checks: Dict[str, bool] = Field(default_factory=dict)
    """
    Что делает: Проверяемые свойства сценария и их исход.
    Пример: {"all_certificates_valid": true, "success_rate": true}
    """
    summary: Dict[str, Any] = Field(default_factory=dict)
    """
    Что делает: Скалярные итоги (доли успехов, теоретический γ и т.п.).
    """

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


class Manifest(BaseModel):
    """
    Содержимое manifest.json директории результатов.
    """
    scenario: Dict[str, Any]
    library_version: str
    rng_algorithm: str
    seed: int
    wall_time_seconds: float
    files: List[str]
    checks: Dict[str, bool]
    summary: Dict[str, Any] = Field(default_factory=dict)


class SuiteRow(BaseModel):
    """
    Строка suite_summary.csv.
    """
    scenario: str
    experiment: str
    status: Literal["pass", "fail", "error"]
    checks_passed: int
    checks_total: int
    message: str = ""


class SuiteSummary(BaseModel):
    rows: List[SuiteRow] = Field(default_factory=list)
    summary_path: Optional[str] = None

    @property
    def all_passed(self) -> bool:
        return all(row.status == "pass" for row in self.rows)
