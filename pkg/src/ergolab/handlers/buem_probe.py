"""
Этот модуль содержит реализацию эксперимента BuemProbeExperiment.
"""
import logging

from ergolab.core.errors import HypothesisViolationError
from ergolab.core.maximal import AverageFamily, buem_probe
from ergolab.models.context import ExperimentContext
from ergolab.models.experiment import ExperimentType
from ergolab.models.results import ExperimentResult, PlotSeries, PlotSpec, ResultTable
from ergolab.services.builder import ScenarioBuilder
from .base import BaseExperiment


class BuemProbeExperiment(BaseExperiment):
    """
    Эксперимент 'buem-probe'.

    Для семейства {A_n} (или {A_n^k}) с центральными ограниченными весами
    оценивает долю случайных x с ‖x‖_Φ < γ, для которых найдена проекция
    e с τ(e⊥) < ε и sup_n ‖e A_n(x) e‖ <= δ. Бюджет ε берется из первого
    значения `params.eps`, число выборок из `params.instances`.
    """

    def __init__(self, builder: ScenarioBuilder):
        super().__init__(builder)
        self._logger = logging.getLogger(__name__)

    def apply(self, context: ExperimentContext) -> ExperimentResult:
        scenario = context.scenario
        params = scenario.params
        instance = self._instance(context)
        if instance.right is not None:
            raise HypothesisViolationError("one-sided-weights", "проба b.u.e.m. рассчитана на односторонние веса")
        phi = self._builder.build_phi(scenario.phi)
        family = AverageFamily(instance.operator, instance.left, instance.subsequence)
        eps = params.eps[0]
        self._logger.info(
            f"Применяю BUEM-PROBE: γ ∈ {params.gamma_grid}, ε = {eps}, δ = {params.delta}, {params.instances} выборок"
        )
        report = buem_probe(
            family,
            phi,
            eps=eps,
            delta=params.delta,
            gamma_grid=params.gamma_grid,
            horizon=params.horizon,
            instances=params.instances,
            seed=context.seed,
        )

        columns = ["gamma", "successes", "instances", "rate", "max_sup", "max_trace_defect", "max_norm_phi"]
        rows = [
            [r.gamma, r.successes, r.instances, r.rate, r.max_sup, r.max_trace_defect, r.max_norm_phi]
            for r in report.rows
        ]
        checks = {
            "monotone": bool(report.monotone),
            "full_at_smallest": bool(report.rows[-1].rate == 1.0),
        }
        plots = [
            PlotSpec(
                name="buem_rate",
                title=f"b.u.e.m.: ε = {eps:g}, δ = {params.delta:g}",
                x_label="γ",
                y_label="доля успехов",
                series=[PlotSeries(label="доля успехов", points=[(r.gamma, r.rate) for r in report.rows])],
                log_x=True,
            )
        ]
        return ExperimentResult(
            scenario_id=scenario.id,
            experiment=ExperimentType.BUEM_PROBE,
            tables=[ResultTable(name="buem_probe", columns=columns, rows=rows)],
            plots=plots,
            checks=checks,
            summary={"theoretical_gamma": report.theoretical_gamma},
        )
