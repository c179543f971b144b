"""
Поиск проекций, существование которых утверждают максимальные неравенства,
и выпуск проверяемых сертификатов с точными константами теорем:

- Йедон: τ(e⊥) <= ‖x‖₁/ε, sup_n ‖e A_n(x) e‖ <= ε для x >= 0;
- L^p-лемма: τ(e⊥) <= (‖x‖_p/ε)^p, sup_n ‖e A_n(x) e‖ <= 2ε;
- взвешенная теорема: τ(e⊥) <= 4(‖x‖_p/ε)^p, sup_n ‖e A_n({b_j}, x) e‖ <= 48Cε.

Проверка сертификата (`verify_certificate`) пересчитывает средние
независимо от кода накопления средних.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy import linalg

from .algebra import AlgebraElement, Projection, functional_calculus, spectral_projection
from .averaging import AverageRequest, average_sequence, make_request
from .errors import (
    CertificationError,
    HypothesisViolationError,
    InvalidArgumentError,
    PreconditionError,
    SearchExhaustedError,
)
from .operators import DSOperator, apply_power
from .orlicz import OrliczFunction, find_linearization_constant, luxemburg_norm, lp_norm
from .projections import compressed_norms, peel
from .sampling import make_rng, random_element
from .subsequences import Subsequence
from .weights import WeightSequence, central_shift_sequences

logger = logging.getLogger(__name__)

DEFAULT_HORIZON = 64
CERT_TOL = 1e-9
POSITIVITY_TOL = 1e-10
KERNEL_REL_TOL = 1e-12
EXHAUSTIVE_MAX_DIM = 4
EXHAUSTIVE_POOL_AVERAGES = 4
DOMINATION_TOL = 1e-9
BUEM_NORM_FRACTION = (0.5, 0.95)


class Theorem(str, Enum):
    YEADON = "yeadon"
    LP = "lp"
    WEIGHTED = "weighted"


class MaximalCertificate(BaseModel):
    """Проекция e вместе с парой (τ(e⊥), sup_n ‖e A_n e‖) и границами теоремы."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    theorem: Theorem
    projection: Projection
    trace_defect: float
    """
    Что делает: τ(e⊥).
    Форма: Неотрицательное число.
    """
    achieved_sup: float
    """
    Что делает: max_{1<=n<=N} ‖e A_n e‖_∞.
    Форма: Неотрицательное число.
    """
    horizon: int
    bound_trace: float
    bound_sup: float
    constants: Dict[str, float] = Field(default_factory=dict)
    """
    Что делает: Использованные константы: eps, p, C.
    Форма: Словарь имя -> число.
    Пример: {"eps": 0.5, "p": 2.0, "C": 1.0}
    """
    strategy: str = ""
    """
    Что делает: Стратегия, давшая проекцию (spectral, kernel, peel, exhaustive, split, meet).
    """
    sup_by_horizon: List[float] = Field(default_factory=list)
    """
    Что делает: Накопленный максимум sup_{n<=N'} ‖e A_n e‖ для N' = 1..N.
    """
    component_defects: List[float] = Field(default_factory=list)
    """
    Что делает: τ(e_l⊥) проекций, пересечение которых дало e (взвешенная теорема).
    """
    component_sups: List[float] = Field(default_factory=list)
    """
    Что делает: sup_n ‖e_l A_n({s_j}, x_l) e_l‖ для сдвинутых весов s_j = Re(b_j) + C и Im(b_j) + C
        на проекции e_l своей положительной части x_l (взвешенная теорема).
    Форма: По два числа на ненулевую часть x_l, каждое <= 2C · 2ε.
    """

    @property
    def is_valid(self) -> bool:
        return _within(self.trace_defect, self.bound_trace) and _within(self.achieved_sup, self.bound_sup)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "theorem": self.theorem.value,
            "projection": self.projection.to_dict(),
            "trace_defect": self.trace_defect,
            "achieved_sup": self.achieved_sup,
            "horizon": self.horizon,
            "bound_trace": self.bound_trace,
            "bound_sup": self.bound_sup,
            "constants": dict(self.constants),
            "strategy": self.strategy,
            "sup_by_horizon": list(self.sup_by_horizon),
            "component_defects": list(self.component_defects),
            "component_sups": list(self.component_sups),
            "valid": self.is_valid,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "MaximalCertificate":
        element = AlgebraElement.from_dict(data["projection"])
        projection = Projection(element.algebra, element.blocks)
        payload = {k: v for k, v in data.items() if k not in ("projection", "valid")}
        return cls(projection=projection, **payload)


def _within(value: float, bound: float) -> bool:
    return bool(value <= bound + CERT_TOL * max(1.0, abs(bound)))


def bounds_for(theorem: Theorem, x: AlgebraElement, eps: float, p: float = 1.0, C: float = 1.0) -> Tuple[float, float]:
    """Границы (для τ(e⊥), для sup) соответствующей теоремы."""
    if theorem == Theorem.YEADON:
        return lp_norm(x, 1.0) / eps, eps
    if theorem == Theorem.LP:
        return (lp_norm(x, p) / eps) ** p, 2 * eps
    return 4 * (lp_norm(x, p) / eps) ** p, 48 * C * eps


def recompute_bounds(cert: MaximalCertificate, x: AlgebraElement, eps: float) -> MaximalCertificate:
    """Тот же e с границами, пересчитанными для нового ε."""
    p = cert.constants.get("p", 1.0)
    C = cert.constants.get("C", 1.0)
    bound_trace, bound_sup = bounds_for(cert.theorem, x, eps, p, C)
    constants = {**cert.constants, "eps": eps}
    return cert.model_copy(update={"bound_trace": bound_trace, "bound_sup": bound_sup, "constants": constants})


# Независимая проверка

@dataclass(frozen=True)
class Verification:
    valid: bool
    trace_defect: float
    achieved_sup: float


def naive_averages(
    t: DSOperator, x: AlgebraElement, horizon: int, weights: Optional[WeightSequence] = None
) -> List[AlgebraElement]:
    """A_n({b_j}, x), n = 1..N, прямым суммированием T^j(b_j x) через `apply_power`."""
    terms = []
    for j in range(horizon):
        y = weights[j] @ x if weights is not None else x
        terms.append(apply_power(t, j, y).to_vector())
    sums = np.cumsum(np.stack(terms), axis=0)
    counts = np.arange(1, horizon + 1)[:, None]
    return [x.algebra.from_vector(v) for v in sums / counts]


def verify_certificate(
    cert: MaximalCertificate, t: DSOperator, x: AlgebraElement, weights: Optional[WeightSequence] = None
) -> Verification:
    """
    Пересчитывает τ(e⊥) и sup_n ‖e A_n e‖ по определению и сравнивает с границами сертификата.
    """
    e = cert.projection
    averages = naive_averages(t, x, cert.horizon, weights)
    sup = max(float(np.linalg.norm(b, 2)) for a in averages for b in (e @ a @ e).blocks)
    defect = e.complement().mass
    valid = _within(defect, cert.bound_trace) and _within(sup, cert.bound_sup)
    return Verification(valid=valid, trace_defect=defect, achieved_sup=sup)


# Поиск

def _require_positive(x: AlgebraElement) -> None:
    scale = max(1.0, x.max_abs_entry())
    if not x.is_self_adjoint(POSITIVITY_TOL * scale) or x.min_eigenvalue() < -POSITIVITY_TOL * scale:
        raise PreconditionError("Максимальная теорема требует положительного x")


def _require_eps(eps: float) -> None:
    if not eps > 0:
        raise InvalidArgumentError(f"ε должно быть > 0, получено {eps}")


def _running_sup(averages: Sequence[AlgebraElement], e: Projection) -> List[float]:
    return [float(v) for v in np.maximum.accumulate(compressed_norms(averages, e))]


def _certificate(
    theorem: Theorem,
    e: Projection,
    averages: Sequence[AlgebraElement],
    bounds: Tuple[float, float],
    constants: Dict[str, float],
    strategy: str,
    components: Sequence[float] = (),
    component_sups: Sequence[float] = (),
) -> MaximalCertificate:
    curve = _running_sup(averages, e)
    return MaximalCertificate(
        theorem=theorem,
        projection=e,
        trace_defect=e.complement_mass,
        achieved_sup=curve[-1],
        horizon=len(averages),
        bound_trace=bounds[0],
        bound_sup=bounds[1],
        constants=constants,
        strategy=strategy,
        sup_by_horizon=curve,
        component_defects=list(components),
        component_sups=list(component_sups),
    )


def _exhaustive_candidates(averages: Sequence[AlgebraElement], violation: AlgebraElement) -> List[Projection]:
    # Проекции коранга 1 и 2, натянутые на собственные векторы V_N и худших средних.
    algebra = violation.algebra
    sources = [violation] + sorted(averages, key=lambda a: -a.operator_norm())[:EXHAUSTIVE_POOL_AVERAGES]
    pool: List[Tuple[int, np.ndarray]] = []
    for src in sources:
        for i, block in enumerate(src.blocks):
            _, vecs = linalg.eigh((block + block.conj().T) / 2)
            pool.extend((i, vecs[:, k]) for k in range(vecs.shape[1]))
    candidates: List[Projection] = []
    for size in (1, 2):
        for combo in itertools.combinations(pool, size):
            bases = []
            for i, d in enumerate(algebra.block_dims):
                vectors = [v for b, v in combo if b == i]
                if vectors:
                    bases.append(linalg.null_space(np.stack(vectors).conj()))
                else:
                    bases.append(np.eye(d))
            candidates.append(Projection.from_ranges(algebra, bases))
    return candidates


def _search(
    theorem: Theorem,
    averages: Sequence[AlgebraElement],
    level: float,
    bounds: Tuple[float, float],
    constants: Dict[str, float],
) -> MaximalCertificate:
    """Общий поиск проекции для семейства положительных средних."""
    algebra = averages[0].algebra
    violation = algebra.zero()
    for a in averages:
        violation = violation + (a - level).real_part().positive_part()
    violation = violation / len(averages)

    attempts: List[MaximalCertificate] = []

    def attempt(e: Projection, strategy: str) -> Optional[MaximalCertificate]:
        cert = _certificate(theorem, e, averages, bounds, constants, strategy)
        logger.debug(
            f"{theorem.value}/{strategy}: τ(e⊥) = {cert.trace_defect:.6g} (граница {cert.bound_trace:.6g}), "
            f"sup = {cert.achieved_sup:.6g} (граница {cert.bound_sup:.6g})"
        )
        attempts.append(cert)
        return cert if cert.is_valid else None

    cert = attempt(spectral_projection(violation, lambda v: v <= level), "spectral")
    if cert:
        return cert
    eta = KERNEL_REL_TOL * max(1.0, violation.operator_norm(), level)
    cert = attempt(spectral_projection(violation, lambda v: v <= eta), "kernel")
    if cert:
        return cert
    result = peel(averages, level=bounds[1], budget=bounds[0])
    cert = attempt(result.projection, "peel")
    if cert:
        return cert
    if algebra.total_dim <= EXHAUSTIVE_MAX_DIM:
        for e in _exhaustive_candidates(averages, violation):
            if e.complement_mass <= bounds[0] + CERT_TOL:
                cert = attempt(e, "exhaustive")
                if cert:
                    return cert

    best = min(attempts, key=lambda c: (c.achieved_sup - c.bound_sup, c.trace_defect))
    raise SearchExhaustedError(
        f"Поиск проекции ({theorem.value}) исчерпан: лучшая попытка τ(e⊥) = {best.trace_defect:.6g}, "
        f"sup = {best.achieved_sup:.6g}",
        best_attempt=best,
    )


def search_yeadon(t: DSOperator, x: AlgebraElement, eps: float, horizon: int = DEFAULT_HORIZON) -> MaximalCertificate:
    """
    Проекция из максимальной теоремы Йедона: τ(e⊥) <= ‖x‖₁/ε и sup_n ‖e A_n(x) e‖ <= ε.

    Стратегии по порядку: спектральный кандидат χ_[0,ε](V_N) для
    V_N = (1/N) Σ_n (A_n − ε)₊, его ядро, жадный пилинг и (при Σd_i <= 4)
    перебор проекций коранга не больше 2.

    :raises PreconditionError: Если x не положителен.
    :raises InvalidArgumentError: Если ε <= 0.
    :raises SearchExhaustedError: Если валидная проекция не найдена; несет лучшую попытку.
    """
    _require_positive(x)
    _require_eps(eps)
    averages = average_sequence(make_request(t, x, n_max=horizon))
    bounds = bounds_for(Theorem.YEADON, x, eps)
    return _search(Theorem.YEADON, averages, eps, bounds, {"eps": eps, "p": 1.0, "C": 1.0})


def search_lp(t: DSOperator, x: AlgebraElement, p: float, eps: float, horizon: int = DEFAULT_HORIZON) -> MaximalCertificate:
    """
    Проекция из L^p-леммы: τ(e⊥) <= (‖x‖_p/ε)^p и sup_n ‖e A_n(x) e‖ <= 2ε.

    Повторяет разбиение x <= x_ε + ε^{1−p} x^p: ищется проекция Йедона для x^p
    на уровне ε^p, после чего сжатия средних самого x сравниваются с 2ε.

    :raises InvalidArgumentError: Если p < 1, p бесконечно или ε <= 0.
    """
    _require_positive(x)
    _require_eps(eps)
    if not 1 <= p < float("inf"):
        raise InvalidArgumentError(f"Показатель p должен лежать в [1, ∞), получено {p}")
    bounds = bounds_for(Theorem.LP, x, eps, p)
    constants = {"eps": eps, "p": float(p), "C": 1.0}
    averages = average_sequence(make_request(t, x, n_max=horizon))

    x_p = functional_calculus(lambda s: max(s, 0.0) ** p, x)
    try:
        inner = search_yeadon(t, x_p, eps**p, horizon)
        cert = _certificate(Theorem.LP, inner.projection, averages, bounds, constants, f"split/{inner.strategy}")
        if cert.is_valid:
            return cert
        logger.debug("Разбиение x <= x_ε + ε^{1−p} x^p не дало валидной проекции, переход к общему поиску")
    except SearchExhaustedError as e:
        logger.debug(f"Поиск для x^p исчерпан: {e}")
    return _search(Theorem.LP, averages, 2 * eps, bounds, constants)


def positive_parts(x: AlgebraElement) -> List[AlgebraElement]:
    """
    x = (x₁ − x₂) + i(x₃ − x₄), x₁ = (Re x)₊, x₂ = (Re x)₋, x₃ = (Im x)₊, x₄ = (Im x)₋.

    Каждое x_l положительно и ‖x_l‖_p <= ‖x‖_p.
    """
    re, im = x.real_part(), x.imag_part()
    return [re.positive_part(), re.negative_part(), im.positive_part(), im.negative_part()]


def _require_central_bounded(b: WeightSequence) -> float:
    if not b.is_central:
        raise HypothesisViolationError("central-weights", f"веса '{b.description}' не лежат в центре Z(M)")
    if not b.is_bounded:
        raise HypothesisViolationError("bounded-weights", f"веса '{b.description}' не ограничены")
    return float(b.bound)


def _domination_defect(family: Sequence[AlgebraElement], plain: Sequence[AlgebraElement], factor: float) -> float:
    # Наибольшее нарушение 0 <= F_n <= factor · A_n по собственным значениям.
    worst = 0.0
    for f, a in zip(family, plain):
        worst = max(worst, -f.min_eigenvalue(), -(a * factor - f).min_eigenvalue())
    return worst


def search_weighted(
    t: DSOperator,
    b: WeightSequence,
    x: AlgebraElement,
    p: float,
    eps: float,
    horizon: int = DEFAULT_HORIZON,
) -> MaximalCertificate:
    """
    Проекция из взвешенной максимальной теоремы:
    τ(e⊥) <= 4(‖x‖_p/ε)^p и sup_n ‖e A_n({b_j}, x) e‖ <= 48Cε, C = sup_j ‖b_j‖.

    Веса сдвигаются до положительных центральных s_j = Re(b_j) + C и
    Im(b_j) + C, так что b_j x = (Re b_j + C)x + i(Im b_j + C)x − (1 + i)Cx.
    Для каждой ненулевой положительной части x_l проекция e_l из L^p-леммы
    (sup_n ‖e_l A_n(x_l) e_l‖ <= 2ε) переносится на оба сдвинутых семейства
    через доминирование 0 <= A_n({s_j}, x_l) <= 2C · A_n(x_l), которое
    проверяется по собственным значениям. e есть пересечение всех e_l.

    :raises HypothesisViolationError: Если веса нецентральны или не ограничены.
    :raises CertificationError: Если доминирование или граница 2C · 2ε для
        сдвинутого семейства нарушены численно.
    """
    C = _require_central_bounded(b)
    _require_eps(eps)
    bounds = bounds_for(Theorem.WEIGHTED, x, eps, p, C)
    shifted = central_shift_sequences(b)
    domination = 2 * C
    constants = {"eps": eps, "p": float(p), "C": C, "domination": domination}

    algebra = x.algebra
    projections: List[Projection] = []
    component_sups: List[float] = []
    for part in positive_parts(x):
        if part.operator_norm() == 0.0:
            continue
        inner = search_lp(t, part, p, eps, horizon)
        plain = average_sequence(make_request(t, part, n_max=horizon))
        tol = DOMINATION_TOL * max(1.0, domination * max(a.operator_norm() for a in plain))
        for s in shifted:
            family = average_sequence(make_request(t, part, left=s, n_max=horizon))
            defect = _domination_defect(family, plain, domination)
            if defect > tol:
                raise CertificationError(
                    f"Нарушено доминирование 0 <= A_n({s.description}, x_l) <= {domination:.6g} · A_n(x_l): "
                    f"дефект {defect:.3e}",
                    witness=part,
                    defects={"domination_defect": defect},
                )
            sup = float(np.max(compressed_norms(family, inner.projection)))
            if not _within(sup, domination * inner.bound_sup):
                raise CertificationError(
                    f"Сдвинутое семейство {s.description}: sup = {sup:.6g} > {domination * inner.bound_sup:.6g}",
                    witness=part,
                    defects={"component_sup": sup},
                )
            component_sups.append(sup)
        projections.append(inner.projection)
    logger.debug(f"Взвешенный поиск: {len(projections)} частей, sup сдвинутых семейств {component_sups}")

    e = Projection.identity(algebra)
    for f in projections:
        e = e.meet(f)

    averages = average_sequence(make_request(t, x, left=b, n_max=horizon))
    cert = _certificate(
        Theorem.WEIGHTED,
        e,
        averages,
        bounds,
        constants,
        "meet",
        [f.complement_mass for f in projections],
        component_sups,
    )
    if not cert.is_valid:
        raise SearchExhaustedError(
            f"Пересечение проекций не дало валидного сертификата: τ(e⊥) = {cert.trace_defect:.6g}, "
            f"sup = {cert.achieved_sup:.6g}",
            best_attempt=cert,
        )
    return cert


# Равностепенная непрерывность в нуле

def equicontinuity_gamma(phi: OrliczFunction, C: float, eps: float, delta: float) -> float:
    """
    Порог γ = min{1, δε / (4·96·C·t)}, где t = find_linearization_constant(Φ, δ/(2C)).
    Константа 4·96·C·t записывается в лог как комментарий.
    """
    if not (C > 0 and eps > 0 and delta > 0):
        raise InvalidArgumentError("C, ε и δ должны быть > 0")
    t = find_linearization_constant(phi, delta / (2 * C))
    constant = 4 * 96 * C * t
    logger.debug(f"Константа равностепенной непрерывности 4·96·C·t = {constant:.6g} (C = {C}, t = {t:.6g})")
    return float(min(1.0, delta * eps / constant))


@dataclass(frozen=True)
class AverageFamily:
    """Семейство {A_n} или {A_n^k} с фиксированными T, {b_j} и k."""
    operator: DSOperator
    left: Optional[WeightSequence] = None
    subsequence: Optional[Subsequence] = None

    def request(self, x: AlgebraElement, horizon: int) -> AverageRequest:
        return make_request(self.operator, x, left=self.left, subsequence=self.subsequence, n_max=horizon)

    def averages(self, x: AlgebraElement, horizon: int) -> List[AlgebraElement]:
        return average_sequence(self.request(x, horizon), subsequential=self.subsequence is not None)


class BuemRow(BaseModel):
    gamma: float
    successes: int
    instances: int
    rate: float
    max_sup: float
    max_trace_defect: float
    max_norm_phi: float = 0.0
    """
    Что делает: Наибольшая ‖x‖_Φ среди выборок строки, всегда < γ.
    """


class BuemReport(BaseModel):
    rows: List[BuemRow]
    theoretical_gamma: float
    monotone: bool
    """
    Что делает: Доля успехов не убывает при уменьшении γ.
    """
    eps: float
    delta: float
    horizon: int


def buem_probe(
    family: AverageFamily,
    phi: OrliczFunction,
    eps: float,
    delta: float,
    gamma_grid: Sequence[float],
    horizon: int = DEFAULT_HORIZON,
    instances: int = 50,
    seed: int = 0,
) -> BuemReport:
    """
    Эмпирическая проверка равностепенной непрерывности в нуле.

    Для каждого γ и каждого экземпляра выбирается новый случайный x с
    ‖x‖_Φ = u·γ, u ~ U[0.5, 0.95]; для него ищется e с τ(e⊥) < ε и
    sup_n ‖e A_n(x) e‖ <= δ. Выборки разных γ независимы, поэтому
    монотонность доли успехов проверяется, а не следует из построения.

    :raises InvalidArgumentError: Если сетка γ не положительна или не убывает.
    :raises HypothesisViolationError: Если веса семейства нецентральны или не ограничены.
    """
    grid = [float(g) for g in gamma_grid]
    if not grid or any(g <= 0 for g in grid) or any(b >= a for a, b in zip(grid, grid[1:])):
        raise InvalidArgumentError(f"Сетка γ должна быть положительной и строго убывающей, получено {grid}")
    C = _require_central_bounded(family.left) if family.left is not None else 1.0
    theoretical = equicontinuity_gamma(phi, C, eps, delta)

    rng = make_rng(seed)
    algebra = family.operator.algebra
    rows: List[BuemRow] = []
    for gamma in grid:
        successes, max_sup, max_defect, max_norm = 0, 0.0, 0.0, 0.0
        for _ in range(instances):
            r = random_element(rng, algebra)
            target = rng.uniform(*BUEM_NORM_FRACTION) * gamma
            x = r * (target / luxemburg_norm(r, phi))
            max_norm = max(max_norm, luxemburg_norm(x, phi))
            result = peel(family.averages(x, horizon), level=delta, budget=eps, strict=True)
            successes += int(result.success)
            max_sup = max(max_sup, result.achieved_sup)
            max_defect = max(max_defect, result.trace_defect)
        rows.append(
            BuemRow(
                gamma=gamma,
                successes=successes,
                instances=instances,
                rate=successes / instances if instances else 1.0,
                max_sup=max_sup,
                max_trace_defect=max_defect,
                max_norm_phi=max_norm,
            )
        )
        logger.info(f"b.u.e.m.: γ = {gamma:g}, успехов {successes}/{instances}")
    monotone = all(b.rate >= a.rate for a, b in zip(rows, rows[1:]))
    if not monotone:
        logger.warning(f"b.u.e.m.: доля успехов не монотонна по γ: {[r.rate for r in rows]}")
    return BuemReport(
        rows=rows, theoretical_gamma=theoretical, monotone=monotone, eps=eps, delta=delta, horizon=horizon
    )
