"""
Этот модуль содержит реализацию эксперимента ConvergenceExperiment.
"""
import logging
from typing import Dict, List

from ergolab.core.convergence import ConvergenceMode, ConvergenceReport, convergence_probe
from ergolab.models.context import ExperimentContext
from ergolab.models.experiment import ExperimentType
from ergolab.models.results import ExperimentResult, PlotSeries, PlotSpec, ResultTable
from ergolab.services.builder import ScenarioBuilder
from .base import BaseExperiment

LIMIT_BOUND_TOL = 1e-6
MAX_NONMONOTONE_STEPS = 1
ORACLE_FACTOR = 10.0


class ConvergenceExperiment(BaseExperiment):
    """
    Эксперимент 'convergence'.

    Для каждого экземпляра строит кривую оконных разрывов Коши вдоль
    расписания и проверяет: разрыв в последней точке не больше половины
    разрыва в первой, τ(e⊥) свидетеля меньше δ, ‖x̂‖_Φ <= C‖x‖_Φ и
    (для обычных средних) близость к пределу из эргодической теоремы о среднем.
    """

    def __init__(self, builder: ScenarioBuilder):
        super().__init__(builder)
        self._logger = logging.getLogger(__name__)

    def apply(self, context: ExperimentContext) -> ExperimentResult:
        scenario = context.scenario
        params = scenario.params
        phi = self._builder.build_phi(scenario.phi)
        mode = ConvergenceMode(params.mode)
        self._logger.info(
            f"Применяю CONVERGENCE ({mode.value}): расписание {params.schedule}, δ = {params.delta}, "
            f"{params.instances} экз."
        )

        def probe(index: int) -> ConvergenceReport:
            instance = self._instance(context, index)
            req = instance.request(params.schedule[-1])
            return convergence_probe(req, phi, params.delta, params.schedule, mode)

        reports = self._map_instances(context, probe)

        rows = []
        for index, report in enumerate(reports):
            for row in report.rows():
                rows.append([index, row.horizon, row.gap, row.trace_defect])

        final_horizon = 2 * params.schedule[-1]
        checks: Dict[str, bool] = {
            "halved": bool(all(r.halved for r in reports)),
            "witness_defect": bool(all(r.witness_trace_defect < params.delta for r in reports)),
            "limit_bound": bool(all(r.limit_norm <= r.limit_bound + LIMIT_BOUND_TOL for r in reports)),
            "monotone": bool(all(r.nonmonotone_steps <= MAX_NONMONOTONE_STEPS for r in reports)),
        }
        oracle = [(i, r.oracle_distance) for i, r in enumerate(reports) if r.oracle_distance is not None]
        if oracle:
            limits = []
            for index, distance in oracle:
                x_norm = self._instance(context, index).element.operator_norm()
                limits.append(distance <= ORACLE_FACTOR * x_norm / final_horizon)
            checks["oracle_agreement"] = bool(all(limits))

        first = reports[0]
        return ExperimentResult(
            scenario_id=scenario.id,
            experiment=ExperimentType.CONVERGENCE,
            tables=[ResultTable(name="convergence", columns=["instance", "N", "gap", "trace_defect"], rows=rows)],
            plots=self._plots(reports, params.schedule),
            checks=checks,
            summary={
                "mode": mode.value,
                "limit_norm": first.limit_norm,
                "limit_bound": first.limit_bound,
                "oracle_distance": first.oracle_distance,
                "nonmonotone_steps": max(r.nonmonotone_steps for r in reports),
            },
        )

    def _plots(self, reports: List[ConvergenceReport], schedule: List[int]) -> List[PlotSpec]:
        series = [
            PlotSeries(label=f"экземпляр {i}", points=[(float(n), float(g)) for n, g in zip(schedule, r.gaps)])
            for i, r in enumerate(reports)
        ]
        return [
            PlotSpec(
                name="gap_curve",
                title="Оконный разрыв Коши",
                x_label="N",
                y_label="sup ‖e(A_m − A_n)e‖",
                series=series,
                log_x=True,
                log_y=True,
            )
        ]
