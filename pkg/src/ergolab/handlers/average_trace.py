"""
Этот модуль содержит реализацию эксперимента AverageTraceExperiment.
"""
import logging
from typing import Dict, List, Optional, Tuple

from ergolab.core.algebra import AlgebraElement, TracialAlgebra, operator_norm
from ergolab.core.averaging import AverageRequest, average_sequence, m_average, rewrite_identity_check, weight_bound
from ergolab.core.errors import HypothesisViolationError, InvalidArgumentError
from ergolab.core.orlicz import luxemburg_norm
from ergolab.models.context import ExperimentContext
from ergolab.models.experiment import ExperimentType
from ergolab.models.results import ExperimentResult, PlotSeries, PlotSpec, ResultTable
from ergolab.services.builder import ScenarioBuilder
from .base import BaseExperiment

NORM_BOUND_TOL = 1e-6


def _check_entries(algebra: TracialAlgebra, entries: List[Tuple[int, int, int]]) -> None:
    for block, row, col in entries:
        if not 0 <= block < algebra.n_blocks:
            raise InvalidArgumentError(f"Блок {block} вне алгебры с {algebra.n_blocks} блоками")
        d = algebra.block_dims[block]
        if not (0 <= row < d and 0 <= col < d):
            raise InvalidArgumentError(f"Элемент ({row}, {col}) вне блока {block} размера {d}")


class AverageTraceExperiment(BaseExperiment):
    """
    Эксперимент 'average-trace'.

    Вычисляет A_1, ..., A_N (или A_n^k, если задана подпоследовательность)
    и записывает для каждого n норму ‖A_n‖_Φ, шаг ‖A_n − A_{n−1}‖_∞
    (A_0 = 0) и выбранные элементы матриц. Для подпоследовательных средних
    дополнительно проверяет тождество A_n^k = (k_n/n) M_n и тождество
    переписывания.
    """

    def __init__(self, builder: ScenarioBuilder):
        super().__init__(builder)
        self._logger = logging.getLogger(__name__)

    def apply(self, context: ExperimentContext) -> ExperimentResult:
        scenario = context.scenario
        params = scenario.params
        instance = self._instance(context)
        phi = self._builder.build_phi(scenario.phi)
        _check_entries(instance.algebra, params.entries)

        req = instance.request(params.horizon)
        subsequential = instance.subsequence is not None
        self._logger.info(
            f"Применяю AVERAGE-TRACE: N = {params.horizon}, "
            f"{'подпоследовательность ' + instance.subsequence.name if instance.subsequence else 'все n'}"
        )
        averages = average_sequence(req, subsequential=subsequential)

        columns = ["n", "norm_phi", "step_sup"]
        for block, row, col in params.entries:
            columns += [f"re[{block},{row},{col}]", f"im[{block},{row},{col}]"]
        rows = []
        norms = []
        previous: AlgebraElement = instance.algebra.zero()
        for n, a in enumerate(averages, start=1):
            norm = luxemburg_norm(a, phi, params.luxemburg_tol)
            norms.append(norm)
            values: List[object] = [n, norm, operator_norm(a - previous)]
            for block, row, col in params.entries:
                z = complex(a.blocks[block][row, col])
                values += [z.real, z.imag]
            rows.append(values)
            previous = a

        x_norm = luxemburg_norm(instance.element, phi, params.luxemburg_tol)
        checks: Dict[str, bool] = {}
        bound: Optional[float]
        try:
            bound = weight_bound(req)
        except HypothesisViolationError:
            bound = None
            self._logger.warning("Веса не ограничены, граница ‖A_n‖_Φ <= C‖x‖_Φ не проверяется")
        if bound is not None:
            checks["norm_bound"] = bool(all(v <= bound * x_norm + NORM_BOUND_TOL for v in norms))

        tables = [ResultTable(name="average_trace", columns=columns, rows=rows)]
        if subsequential:
            tables.append(self._identity_table(context, req, averages, checks))

        plots = [
            PlotSpec(
                name="average_trace",
                title=f"‖A_n‖_Φ, Φ = {phi.name}",
                x_label="n",
                y_label="‖A_n‖_Φ",
                series=[PlotSeries(label="‖A_n‖_Φ", points=[(float(r[0]), float(r[1])) for r in rows])],
            )
        ]
        return ExperimentResult(
            scenario_id=scenario.id,
            experiment=ExperimentType.AVERAGE_TRACE,
            tables=tables,
            plots=plots,
            checks=checks,
            summary={"weight_bound": bound, "x_norm_phi": x_norm, "final_norm_phi": norms[-1]},
        )

    def _identity_table(
        self,
        context: ExperimentContext,
        req: AverageRequest,
        averages: List[AlgebraElement],
        checks: Dict[str, bool],
    ) -> ResultTable:
        """
        Дефекты тождеств в контрольных точках n: масштабирование M_n и
        (для односторонних средних) тождество переписывания.
        """
        params = context.scenario.params
        k = req.subsequence
        assert k is not None
        rows = []
        for n in params.check_points:
            if n > len(averages) or not k.supports_horizon(n + 1):
                continue
            scaled = m_average(req, n) * (k[n] / n)
            m_defect = operator_norm(averages[n - 1] - scaled)
            rewrite = rewrite_identity_check(req, n, params.rewrite_tol, strict=False) if req.is_one_sided else None
            rows.append([n, m_defect, rewrite])
        if rows:
            checks["m_scaling"] = bool(all(r[1] <= params.rewrite_tol for r in rows))
            if req.is_one_sided:
                checks["rewrite_identity"] = bool(all(r[2] <= params.rewrite_tol for r in rows))
        return ResultTable(name="identities", columns=["n", "m_scaling_defect", "rewrite_defect"], rows=rows)
