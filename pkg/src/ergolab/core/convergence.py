"""
Окрестности топологии сходимости по мере, расстояние в смысле b.a.u./a.u.
сходимости, оценка предела и эмпирические пробы теорем о сходимости.

В конечной размерности топология по мере совпадает с нормовой, поэтому
наблюдаемой величиной служит убывание оконных разрывов Коши при
фиксированной проекции-свидетеле.
"""
from __future__ import annotations

import logging
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import linalg

from .algebra import AlgebraElement, Projection, projection_meet, spectral_projection
from .averaging import AverageRequest, average_sequence, weight_bound
from .errors import HypothesisViolationError, InvalidArgumentError
from .operators import DSOperator
from .orlicz import OrliczFunction, luxemburg_norm
from .projections import compressed_norms, peel

logger = logging.getLogger(__name__)

WINDOW_POINTS = 33
ORACLE_RCOND = 1e-9
NEIGHBORHOOD_TOL = 1e-12


class ConvergenceMode(str, Enum):
    AU = "au"
    BAU = "bau"


def in_measure_neighborhood(
    x: AlgebraElement, eps: float, delta: float, bilateral: bool = False
) -> Tuple[bool, Optional[Projection]]:
    """
    Проверяет x ∈ N(ε, δ) (‖xe‖ <= ε) или x ∈ N′(ε, δ) (‖exe‖ <= ε) при τ(e⊥) <= δ.

    Односторонний свидетель: χ_[0,ε](|x|). Двусторонние кандидаты: тот же
    свидетель, пересечение χ_[−ε/2,ε/2](Re x) ∧ χ_[−ε/2,ε/2](Im x) и пилинг.

    :return: (True, свидетель) при успехе, иначе (False, None).
    :raises InvalidArgumentError: Если ε <= 0 или δ <= 0.
    """
    if not (eps > 0 and delta > 0):
        raise InvalidArgumentError(f"ε и δ должны быть > 0, получено ε = {eps}, δ = {delta}")
    one_sided = spectral_projection(x.abs(), lambda v: v <= eps)
    candidates: List[Projection] = [one_sided]
    if bilateral:
        half = eps / 2
        re_band = spectral_projection(x.real_part(), lambda v: np.abs(v) <= half)
        im_band = spectral_projection(x.imag_part(), lambda v: np.abs(v) <= half)
        candidates.append(projection_meet(re_band, im_band))
        candidates.append(peel([x], level=eps, budget=delta).projection)

    for e in candidates:
        if e.complement_mass > delta + NEIGHBORHOOD_TOL:
            continue
        norm = compressed_norms([x], e, one_sided=not bilateral)[0]
        if norm <= eps + NEIGHBORHOOD_TOL * max(1.0, eps):
            return True, e
    return False, None


def bau_distance(
    tail: Sequence[AlgebraElement], xhat: AlgebraElement, delta: float, one_sided: bool = False
) -> Tuple[float, Projection]:
    """
    Ищет e с τ(e⊥) < δ, (эвристически) минимизирующую sup_n ‖e(x_n − x̂)e‖.

    :return: (достигнутый sup, e).
    """
    if not tail:
        raise InvalidArgumentError("Хвост последовательности пуст")
    if not delta > 0:
        raise InvalidArgumentError(f"δ должно быть > 0, получено {delta}")
    diffs = [x - xhat for x in tail]
    result = peel(diffs, level=0.0, budget=delta, strict=True, one_sided=one_sided)
    return result.achieved_sup, result.projection


def estimate_limit(averages: Sequence[AlgebraElement]) -> AlgebraElement:
    """Среднее Чезаро по второй половине последовательности средних."""
    if len(averages) < 2:
        raise InvalidArgumentError("Для оценки предела нужно не меньше двух средних")
    tail = averages[len(averages) // 2:]
    total = tail[0].algebra.zero()
    for a in tail:
        total = total + a
    return total / len(tail)


def mean_ergodic_limit(t: DSOperator, x: AlgebraElement) -> AlgebraElement:
    """
    Проекция x на неподвижное пространство T вдоль образа T − 1:
    P = V (W* V)^{-1} W*, где столбцы V и W базисы ker(M − 1) и ker((M − 1)*)
    для координатной матрицы M. Это предел средних Чезаро (1/n) Σ T^j(x).
    """
    m = t.coordinate_matrix()
    shifted = m - np.eye(m.shape[0])
    v = linalg.null_space(shifted, rcond=ORACLE_RCOND)
    w = linalg.null_space(shifted.conj().T, rcond=ORACLE_RCOND)
    if v.shape[1] == 0:
        return x.algebra.zero()
    vec = x.to_vector()
    coeffs = linalg.solve(w.conj().T @ v, w.conj().T @ vec)
    return x.algebra.from_vector(v @ coeffs)


class ScheduleRow(BaseModel):
    horizon: int
    gap: float
    trace_defect: float


class ConvergenceReport(BaseModel):
    """Результат пробы сходимости вдоль расписания горизонтов."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    mode: ConvergenceMode
    schedule: List[int]
    gaps: List[float]
    """
    Что делает: sup по парам m, n из окна [N, 2N] величины ‖e(A_m − A_n)e‖ (или ‖(A_m − A_n)e‖).
    Форма: По одному числу на точку расписания.
    """
    witness: Projection
    witness_trace_defect: float
    limit: AlgebraElement
    limit_norm: float
    limit_bound: float
    """
    Что делает: C · ‖x‖_Φ, граница для ‖x̂‖_Φ.
    """
    oracle_distance: Optional[float] = None
    """
    Что делает: ‖A_{2N} − x̂_oracle‖_∞ для обычных средних, иначе None.
    """
    monotone: bool
    nonmonotone_steps: int

    @property
    def halved(self) -> bool:
        """Разрыв в последней точке не больше половины разрыва в первой."""
        return self.gaps[-1] <= 0.5 * self.gaps[0]

    def rows(self) -> List[ScheduleRow]:
        return [
            ScheduleRow(horizon=n, gap=g, trace_defect=self.witness_trace_defect)
            for n, g in zip(self.schedule, self.gaps)
        ]


def window_points(horizon: int, points: int = WINDOW_POINTS) -> List[int]:
    """Около `points` равномерно расположенных номеров из [N, 2N]."""
    return sorted({int(round(v)) for v in np.linspace(horizon, 2 * horizon, points)})


def windowed_gap(
    averages: Sequence[AlgebraElement], horizon: int, witness: Projection, one_sided: bool = False
) -> float:
    """
    sup_{m,n ∈ окно [N, 2N]} ‖e(A_m − A_n)e‖; averages[i] есть A_{i+1}.
    """
    idx = window_points(horizon)
    window = [averages[i - 1] for i in idx]
    diffs = [window[a] - window[b] for a in range(len(window)) for b in range(a + 1, len(window))]
    if not diffs:
        return 0.0
    return float(compressed_norms(diffs, witness, one_sided).max())


def _check_hypotheses(req: AverageRequest, mode: ConvergenceMode) -> None:
    if mode == ConvergenceMode.BAU:
        if req.right is not None:
            raise HypothesisViolationError("one-sided-weights", "проба b.a.u. рассчитана на односторонние веса")
        if req.left is not None and not req.left.is_central:
            raise HypothesisViolationError("central-weights", f"веса '{req.left.description}' не лежат в центре Z(M)")
        if req.left is not None and not req.left.is_bounded:
            raise HypothesisViolationError("bounded-weights", f"веса '{req.left.description}' не ограничены")
    else:
        bounded = [w for w in (req.left, req.right) if w is None or w.is_bounded]
        if not bounded:
            raise HypothesisViolationError("bounded-weights", "хотя бы одна из весовых последовательностей должна быть ограничена")
    if req.subsequence is not None and req.subsequence.declared_density not in (None, 1.0):
        logger.warning(
            f"Подпоследовательность '{req.subsequence.name}' имеет плотность {req.subsequence.declared_density}, "
            f"теорема о сходимости b.a.u. формулируется для плотности 1"
        )


def convergence_probe(
    req: AverageRequest,
    phi: OrliczFunction,
    delta: float,
    schedule: Sequence[int],
    mode: ConvergenceMode = ConvergenceMode.BAU,
) -> ConvergenceReport:
    """
    Вычисляет средние до горизонта 2·max(schedule), оценивает предел x̂,
    находит проекцию-свидетеля с τ(e⊥) < δ и строит кривую оконных разрывов.

    :raises InvalidArgumentError: Если расписание пусто или не возрастает строго.
    :raises HypothesisViolationError: Если веса нарушают гипотезы выбранного режима.
    """
    points = [int(n) for n in schedule]
    if not points or points[0] < 1 or any(b <= a for a, b in zip(points, points[1:])):
        raise InvalidArgumentError(f"Расписание должно быть строго возрастающим и положительным, получено {points}")
    _check_hypotheses(req, mode)
    one_sided = mode == ConvergenceMode.AU

    horizon = 2 * points[-1]
    full = req.with_changes(n_max=horizon)
    averages = average_sequence(full, subsequential=req.subsequence is not None)
    xhat = estimate_limit(averages)
    _, witness = bau_distance(averages[points[0] - 1:], xhat, delta, one_sided=one_sided)

    gaps = [windowed_gap(averages, n, witness, one_sided) for n in points]
    steps = sum(1 for a, b in zip(gaps, gaps[1:]) if b > a)
    if steps:
        logger.warning(f"Кривая разрывов немонотонна: {steps} шаг(ов) роста, разрывы {gaps}")

    oracle_distance = None
    if req.left is None and req.right is None and req.subsequence is None:
        oracle = mean_ergodic_limit(req.operator, req.element)
        oracle_distance = averages[-1].distance(oracle)

    C = weight_bound(req)
    report = ConvergenceReport(
        mode=mode,
        schedule=points,
        gaps=gaps,
        witness=witness,
        witness_trace_defect=witness.complement_mass,
        limit=xhat,
        limit_norm=luxemburg_norm(xhat, phi),
        limit_bound=C * luxemburg_norm(req.element, phi),
        oracle_distance=oracle_distance,
        monotone=steps == 0,
        nonmonotone_steps=steps,
    )
    logger.info(
        f"Проба сходимости ({mode.value}): разрывы {[f'{g:.3e}' for g in gaps]}, τ(e⊥) = {report.witness_trace_defect:.3g}"
    )
    return report
