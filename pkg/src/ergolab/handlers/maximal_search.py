"""
Этот модуль содержит реализацию эксперимента MaximalSearchExperiment.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from ergolab.core.errors import SearchExhaustedError
from ergolab.core.maximal import (
    MaximalCertificate,
    Theorem,
    search_lp,
    search_weighted,
    search_yeadon,
    verify_certificate,
)
from ergolab.core.orlicz import lp_norm
from ergolab.core.weights import unit_weights
from ergolab.models.context import ExperimentContext
from ergolab.models.experiment import ExperimentType
from ergolab.models.results import ExperimentResult, PlotSeries, PlotSpec, ResultTable
from ergolab.services.builder import Instance, ScenarioBuilder
from .base import BaseExperiment
from .writers.json import to_builtin

EXHAUSTIVE_DIM = 4

COLUMNS = [
    "instance",
    "total_dim",
    "eps",
    "trace_defect",
    "bound_trace",
    "achieved_sup",
    "bound_sup",
    "strategy",
    "valid",
    "reverified",
]


@dataclass
class _InstanceOutcome:
    rows: List[List[Any]] = field(default_factory=list)
    certificates: List[Dict[str, Any]] = field(default_factory=list)
    attempts: int = 0
    successes: int = 0
    small: bool = False


class MaximalSearchExperiment(BaseExperiment):
    """
    Эксперимент 'maximal-search'.

    Для каждого экземпляра серии и каждого ε из сетки ищет проекцию
    выбранной теоремы. Каждый сертификат сериализуется, читается обратно
    и перепроверяется независимым верификатором. Исчерпанный поиск
    записывается строкой с valid = False и никогда не выдается за успех.
    """

    def __init__(self, builder: ScenarioBuilder):
        super().__init__(builder)
        self._logger = logging.getLogger(__name__)

    def apply(self, context: ExperimentContext) -> ExperimentResult:
        scenario = context.scenario
        params = scenario.params
        theorem = Theorem(params.theorem)
        self._logger.info(
            f"Применяю MAXIMAL-SEARCH ({theorem.value}): {params.instances} экз., ε = {params.eps}, N = {params.horizon}"
        )
        outcomes = self._map_instances(context, lambda i: self._run_instance(context, i, theorem))

        rows = [row for o in outcomes for row in o.rows]
        certificates = [c for o in outcomes for c in o.certificates]
        attempts = sum(o.attempts for o in outcomes)
        successes = sum(o.successes for o in outcomes)
        rate = successes / attempts if attempts else 1.0

        checks = {
            "all_certificates_valid": bool(all(c["valid"] and c["reverified"] for c in certificates)),
            "success_rate": bool(rate >= params.min_success_rate),
        }
        small = [o for o in outcomes if o.small]
        if theorem == Theorem.YEADON and small:
            checks["small_dim_complete"] = bool(all(o.successes == o.attempts for o in small))
        if rate < 1.0:
            self._logger.warning(f"Поиск исчерпан в {attempts - successes} из {attempts} попыток")

        return ExperimentResult(
            scenario_id=scenario.id,
            experiment=ExperimentType.MAXIMAL_SEARCH,
            tables=[ResultTable(name="certificates", columns=COLUMNS, rows=rows)],
            certificates=certificates,
            plots=self._plots(certificates),
            checks=checks,
            summary={"attempts": attempts, "successes": successes, "success_rate": rate, "theorem": theorem.value},
        )

    def _search(self, theorem: Theorem, instance: Instance, eps: float, context: ExperimentContext) -> MaximalCertificate:
        params = context.scenario.params
        t, x = instance.operator, instance.element
        if theorem == Theorem.YEADON:
            return search_yeadon(t, x, eps, params.horizon)
        if theorem == Theorem.LP:
            return search_lp(t, x, params.p, eps, params.horizon)
        weights = instance.left if instance.left is not None else unit_weights(instance.algebra)
        return search_weighted(t, weights, x, params.p, eps, params.horizon)

    def _run_instance(self, context: ExperimentContext, index: int, theorem: Theorem) -> _InstanceOutcome:
        params = context.scenario.params
        instance = self._instance(context, index)
        algebra = instance.algebra
        outcome = _InstanceOutcome(small=algebra.total_dim <= EXHAUSTIVE_DIM)
        scale = 1.0
        if params.eps_relative:
            scale = lp_norm(instance.element, 1.0) / algebra.tau_one or 1.0
        weights = None
        if theorem == Theorem.WEIGHTED:
            weights = instance.left if instance.left is not None else unit_weights(algebra)

        for eps0 in params.eps:
            eps = eps0 * scale
            outcome.attempts += 1
            try:
                cert = self._search(theorem, instance, eps, context)
            except SearchExhaustedError as e:
                self._logger.warning(f"Экземпляр {index}, ε = {eps:.6g}: {e}")
                best: Optional[MaximalCertificate] = e.best_attempt
                outcome.rows.append(
                    [
                        index,
                        algebra.total_dim,
                        eps,
                        best.trace_defect if best else None,
                        best.bound_trace if best else None,
                        best.achieved_sup if best else None,
                        best.bound_sup if best else None,
                        "exhausted",
                        False,
                        False,
                    ]
                )
                continue

            reloaded = MaximalCertificate.from_dict(json.loads(json.dumps(cert.to_dict(), default=to_builtin)))
            check = verify_certificate(reloaded, instance.operator, instance.element, weights)
            outcome.successes += int(cert.is_valid)
            outcome.rows.append(
                [
                    index,
                    algebra.total_dim,
                    eps,
                    cert.trace_defect,
                    cert.bound_trace,
                    cert.achieved_sup,
                    cert.bound_sup,
                    cert.strategy,
                    bool(cert.is_valid),
                    bool(check.valid),
                ]
            )
            outcome.certificates.append(
                {**cert.to_dict(), "instance": index, "reverified": bool(check.valid), "valid": bool(cert.is_valid)}
            )
        return outcome

    def _plots(self, certificates: List[Dict[str, Any]]) -> List[PlotSpec]:
        if not certificates:
            return []
        first = certificates[0]
        curve = first["sup_by_horizon"]
        return [
            PlotSpec(
                name="sup_by_horizon",
                title=f"Экземпляр {first['instance']}, ε = {first['constants']['eps']:.4g}",
                x_label="N",
                y_label="max ‖e A_n e‖",
                series=[
                    PlotSeries(label="sup_{n<=N} ‖e A_n e‖", points=[(float(n), float(v)) for n, v in enumerate(curve, 1)]),
                    PlotSeries(label="граница", points=[(1.0, first["bound_sup"]), (float(len(curve)), first["bound_sup"])]),
                ],
            )
        ]
