"""
Этот модуль содержит реализацию эксперимента NormTableExperiment.
"""
import logging
from typing import Dict, Optional

from ergolab.core.orlicz import lp_norm, norm_table
from ergolab.core.singular_values import singular_number_function, trace_of_function
from ergolab.models.context import ExperimentContext
from ergolab.models.experiment import ExperimentType
from ergolab.models.results import ExperimentResult, PlotSeries, PlotSpec, ResultTable
from ergolab.services.builder import ScenarioBuilder
from .base import BaseExperiment

CLOSED_FORM_TOL = 1e-8
TRACE_IDENTITY_TOL = 1e-9
MODULAR_TOL = 1e-8


def power_exponent(name: str) -> Optional[float]:
    """p для имени "p:<p>", иначе None."""
    if name.startswith("p:"):
        return float(name[2:])
    return None


class NormTableExperiment(BaseExperiment):
    """
    Эксперимент 'norm-table'.

    Записывает p-нормы (p = 1, 2, 3, ∞), норму Люксембурга, модуляр
    τ(Φ(|x|)) и вердикт Δ₂, а также ступенчатую функцию μ_t(x).
    """

    def __init__(self, builder: ScenarioBuilder):
        super().__init__(builder)
        self._logger = logging.getLogger(__name__)

    def apply(self, context: ExperimentContext) -> ExperimentResult:
        scenario = context.scenario
        params = scenario.params
        x = self._instance(context).element
        phi = self._builder.build_phi(scenario.phi)
        self._logger.info(f"Применяю NORM-TABLE: Φ = {phi.name}")

        table = norm_table(x, phi, params.luxemburg_tol)
        mu = singular_number_function(x)
        luxemburg = float(table["luxemburg"])  # type: ignore[arg-type]
        modular_at_1 = float(table["modular_at_1"])  # type: ignore[arg-type]

        checks: Dict[str, bool] = {}
        if luxemburg <= 1.0:
            checks["modular_bound"] = bool(modular_at_1 <= luxemburg + MODULAR_TOL)
        p = power_exponent(phi.name)
        if p is not None:
            closed = lp_norm(x, p) * p ** (-1.0 / p)
            checks["closed_form"] = bool(abs(luxemburg - closed) <= CLOSED_FORM_TOL * max(1.0, closed))
        direct = float((x.adjoint() @ x).trace().real)
        via_mu = trace_of_function(lambda t: t * t, x)
        checks["trace_identity"] = bool(abs(direct - via_mu) <= TRACE_IDENTITY_TOL * max(1.0, direct))

        points = []
        for start, end, value in mu.rows():
            points += [(start, value), (end, value)]
        return ExperimentResult(
            scenario_id=scenario.id,
            experiment=ExperimentType.NORM_TABLE,
            tables=[
                ResultTable(name="norms", columns=list(table.keys()), rows=[list(table.values())]),
                ResultTable(name="singular_numbers", columns=["t_start", "t_end", "mu"], rows=[list(r) for r in mu.rows()]),
            ],
            plots=[
                PlotSpec(
                    name="singular_numbers",
                    title="μ_t(x)",
                    x_label="t",
                    y_label="μ_t",
                    series=[PlotSeries(label="μ_t(x)", points=points)],
                )
            ],
            checks=checks,
            summary=dict(table),
        )
