"""
Тригонометрические полиномы ψ(k) = Σ z_j u_j^k, последовательности
Безиковича (центральные, общие и скалярные) и ошибка приближения.

Фазы задаются в оборотах: θ соответствует e^{2πiθ}.
"""
from __future__ import annotations

import logging
import threading
from enum import Enum
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .algebra import AlgebraElement, CenterElement, TracialAlgebra, operator_norm
from .errors import InvalidArgumentError
from .sampling import make_rng, random_central_phases, random_unitary
from .subsequences import Subsequence

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-10


class WeightKind(str, Enum):
    """Вид весовой последовательности."""
    TRIG = "trig"
    PERTURBED_TRIG = "perturbed-trig"
    SCALAR = "scalar"
    CENTRAL_SCALAR = "central-scalar"
    INDICATOR_MASKED = "indicator-masked"


class PerturbationType(str, Enum):
    NONE = "none"
    HARMONIC = "harmonic"
    POWER = "power"


def turns_to_phase(turns: float) -> complex:
    return complex(np.exp(2j * np.pi * float(turns)))


def parse_complex(value: Any) -> complex:
    """Число или пара [re, im]."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidArgumentError(f"Комплексное число задается парой [re, im], получено {value}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


class TrigPolynomial:
    """
    ψ(k) = Σ_j z_j u_j^k над унитарными элементами u_j.

    Если все u_j центральны, значения вычисляются по фазам блоков точно
    и возвращаются как `CenterElement`.
    """

    def __init__(self, coefficients: Sequence[complex], unitaries: Sequence[AlgebraElement]):
        if not coefficients or len(coefficients) != len(unitaries):
            raise InvalidArgumentError(
                f"Число коэффициентов ({len(coefficients)}) и унитарных элементов ({len(unitaries)}) должно совпадать и быть >= 1"
            )
        algebra = unitaries[0].algebra
        one = algebra.identity()
        for i, u in enumerate(unitaries):
            if u.algebra != algebra:
                raise InvalidArgumentError("Унитарные элементы принадлежат разным алгебрам")
            defect = max(operator_norm(u.adjoint() @ u - one), operator_norm(u @ u.adjoint() - one))
            if defect > UNITARY_TOL:
                raise InvalidArgumentError(f"Элемент u_{i} не унитарен: дефект {defect:.3e}")
        self._algebra = algebra
        self._coefficients = np.asarray([complex(z) for z in coefficients], dtype=np.complex128)
        self._unitaries = tuple(unitaries)
        self._central = all(u.is_central() for u in unitaries)
        if self._central:
            self._phases = np.asarray([CenterElement.from_element(u).scalars for u in unitaries])
        self._powers: List[List[AlgebraElement]] = [[one] for _ in unitaries]
        self._lock = threading.Lock()

    @property
    def algebra(self) -> TracialAlgebra:
        return self._algebra

    @property
    def coefficients(self) -> np.ndarray:
        return self._coefficients

    @property
    def unitaries(self) -> tuple:
        return self._unitaries

    @property
    def is_central(self) -> bool:
        return self._central

    @property
    def bound(self) -> float:
        """Σ |z_j|, оценка сверху для sup_k ‖ψ(k)‖."""
        return float(np.sum(np.abs(self._coefficients)))

    def _unitary_power(self, i: int, k: int) -> AlgebraElement:
        with self._lock:
            powers = self._powers[i]
            while len(powers) <= k:
                powers.append(powers[-1] @ self._unitaries[i])
            return powers[k]

    def evaluate(self, k: int) -> AlgebraElement:
        return eval_trig(self, k)


def eval_trig(psi: TrigPolynomial, k: int) -> AlgebraElement:
    """
    ψ(k) как конечная сумма с кешированными степенями унитарных элементов.

    :raises InvalidArgumentError: Если k < 0.
    """
    if k < 0:
        raise InvalidArgumentError(f"Индекс k должен быть >= 0, получено {k}")
    if psi.is_central:
        scalars = np.sum(psi.coefficients[:, None] * psi._phases**k, axis=0)
        return CenterElement(psi.algebra, scalars)
    total = psi.algebra.zero()
    for i, z in enumerate(psi.coefficients):
        total = total + z * psi._unitary_power(i, k)
    return total


class WeightSequence:
    """
    Последовательность весов {b_j} с ленивым вычислением и мемоизацией по индексу.

    :param algebra: Алгебра, которой принадлежат веса.
    :param kind: Вид последовательности.
    :param generator: j ↦ b_j.
    :param bound: C = sup_j ‖b_j‖, если последовательность ограничена.
    :param central: Лежат ли все b_j в центре (тогда это `CenterElement`).
    :param base: Тригонометрический полином, приближающий последовательность.
    """

    def __init__(
        self,
        algebra: TracialAlgebra,
        kind: WeightKind,
        generator: Callable[[int], AlgebraElement],
        bound: Optional[float],
        central: bool,
        base: Optional[TrigPolynomial] = None,
        description: str = "",
    ):
        self.algebra = algebra
        self.kind = kind
        self._generator = generator
        self.bound = bound
        self.is_central = central
        self.base = base
        self.description = description or kind.value
        self._memo: Dict[int, AlgebraElement] = {}
        self._lock = threading.Lock()

    @property
    def is_bounded(self) -> bool:
        return self.bound is not None

    def __getitem__(self, j: int) -> AlgebraElement:
        if j < 0:
            raise InvalidArgumentError(f"Индекс веса должен быть >= 0, получено {j}")
        with self._lock:
            cached = self._memo.get(j)
        if cached is not None:
            return cached
        value = self._generator(j)
        with self._lock:
            self._memo.setdefault(j, value)
        return value

    def take(self, n: int) -> List[AlgebraElement]:
        return [self[j] for j in range(n)]

    def __repr__(self) -> str:
        return f"WeightSequence({self.description!r}, C={self.bound}, central={self.is_central})"


def unit_weights(algebra: TracialAlgebra) -> WeightSequence:
    """b_j = 1 для всех j."""
    one = CenterElement(algebra, [1.0] * algebra.n_blocks)
    psi = TrigPolynomial([1.0], [one])
    return WeightSequence(algebra, WeightKind.CENTRAL_SCALAR, lambda j: one, 1.0, True, psi, "unit")


def _schedule(perturbation: Mapping[str, Any]) -> Optional[Callable[[int], float]]:
    kind = PerturbationType(perturbation.get("type", "none"))
    if kind == PerturbationType.NONE:
        return None
    eps0 = float(perturbation.get("eps0", 0.0))
    if eps0 < 0:
        raise InvalidArgumentError(f"eps0 должно быть >= 0, получено {eps0}")
    if kind == PerturbationType.HARMONIC:
        return lambda j: eps0 / (j + 1)
    exponent = float(perturbation.get("exponent", 1.0))
    if exponent <= 0:
        raise InvalidArgumentError(
            f"Возмущение eps0/(j+1)^{exponent} не суммируемо в среднем: требуется показатель > 0"
        )
    return lambda j: eps0 / (j + 1) ** exponent


def _parse_perturbation(spec: Mapping[str, Any]) -> Mapping[str, Any]:
    raw = spec.get("perturbation") or {"type": "none"}
    try:
        PerturbationType(raw.get("type", "none"))
    except ValueError as e:
        raise InvalidArgumentError(
            f"Неизвестный тип возмущения '{raw.get('type')}' (ожидается none, harmonic или power)"
        ) from e
    return raw


def _coefficients(spec: Mapping[str, Any], m: int) -> List[complex]:
    raw = spec.get("coefficients")
    if raw is None:
        return [1.0 / m] * m
    coeffs = [parse_complex(z) for z in raw]
    if len(coeffs) != m:
        raise InvalidArgumentError(f"Ожидалось {m} коэффициентов, получено {len(coeffs)}")
    return coeffs


def _central_base(algebra: TracialAlgebra, spec: Mapping[str, Any]) -> TrigPolynomial:
    phases = spec.get("phases")
    if not phases:
        raise InvalidArgumentError("Центральная последовательность требует списка фаз 'phases'")
    rows = [phases] if not isinstance(phases[0], (list, tuple)) else phases
    unitaries = []
    for row in rows:
        if len(row) != algebra.n_blocks:
            raise InvalidArgumentError(f"Каждый набор фаз должен содержать {algebra.n_blocks} значений, получено {len(row)}")
        unitaries.append(CenterElement(algebra, [turns_to_phase(t) for t in row]))
    return TrigPolynomial(_coefficients(spec, len(unitaries)), unitaries)


def _scalar_base(algebra: TracialAlgebra, spec: Mapping[str, Any]) -> TrigPolynomial:
    phases = spec.get("phases")
    if not phases:
        raise InvalidArgumentError("Скалярная последовательность требует списка фаз 'phases'")
    unitaries = [CenterElement(algebra, [turns_to_phase(t)] * algebra.n_blocks) for t in phases]
    return TrigPolynomial(_coefficients(spec, len(unitaries)), unitaries)


def _general_base(algebra: TracialAlgebra, spec: Mapping[str, Any], rng: np.random.Generator) -> TrigPolynomial:
    m = int(spec.get("terms", 1))
    if m < 1:
        raise InvalidArgumentError(f"Число слагаемых должно быть >= 1, получено {m}")
    unitaries = [random_unitary(rng, algebra) for _ in range(m)]
    return TrigPolynomial(_coefficients(spec, m), unitaries)


def make_weight_sequence(algebra: TracialAlgebra, spec: Mapping[str, Any], seed: int) -> WeightSequence:
    """
    Строит последовательность Безиковича b_j = ψ(j) + δ_j · c.

    :param spec: {"kind": "central"|"scalar"|"unit"|"trig", "phases": [...],
        "coefficients": [...], "terms": m, "perturbation": {"type": ..., "eps0": ..., "exponent": ...},
        "seed": ...}. Направление c имеет норму 1 и выбирается по зерну.
    :param seed: Зерно сценария; ключ "seed" в spec имеет приоритет.
    :raises InvalidArgumentError: Некорректное описание или несуммируемое возмущение.
    """
    kind = spec.get("kind", "unit")
    rng = make_rng(int(spec["seed"]) if spec.get("seed") is not None else seed)
    if kind == "unit":
        return unit_weights(algebra)

    perturbation = _parse_perturbation(spec)
    delta = _schedule(perturbation)
    if kind == "central":
        base = _central_base(algebra, spec)
        direction: AlgebraElement = random_central_phases(rng, algebra)
        weight_kind = WeightKind.CENTRAL_SCALAR
    elif kind == "scalar":
        base = _scalar_base(algebra, spec)
        direction = CenterElement(algebra, [1.0] * algebra.n_blocks)
        weight_kind = WeightKind.SCALAR
    elif kind == "trig":
        base = _general_base(algebra, spec, rng)
        direction = random_unitary(rng, algebra)
        weight_kind = WeightKind.TRIG if delta is None else WeightKind.PERTURBED_TRIG
    else:
        raise InvalidArgumentError(f"Неизвестный вид весов: '{kind}'")

    central = base.is_central
    bound = base.bound
    if delta is None:
        generator: Callable[[int], AlgebraElement] = base.evaluate
    else:
        bound += delta(0)
        if central:
            c_scalars = CenterElement.from_element(direction).scalars

            def generator(j: int) -> AlgebraElement:
                value = eval_trig(base, j)
                assert isinstance(value, CenterElement)
                return CenterElement(algebra, value.scalars + delta(j) * c_scalars)
        else:

            def generator(j: int) -> AlgebraElement:
                return eval_trig(base, j) + delta(j) * direction

    seq = WeightSequence(algebra, weight_kind, generator, bound, central, base, description=kind)
    logger.debug(f"Создана весовая последовательность {seq!r}")
    return seq


def make_central_besicovitch(algebra: TracialAlgebra, spec: Mapping[str, Any], seed: int) -> WeightSequence:
    """
    Ограниченная последовательность Безиковича в центре Z(M).

    :raises InvalidArgumentError: Если описание задает нецентральные веса
        или возмущение не суммируемо в среднем.
    """
    seq = make_weight_sequence(algebra, spec, seed)
    if not seq.is_central:
        raise InvalidArgumentError(f"Вид весов '{spec.get('kind')}' не задает центральную последовательность")
    return seq


def besicovitch_error(b: WeightSequence, psi: TrigPolynomial, n: int) -> float:
    """(1/n) Σ_{j<n} ‖b_j − ψ(j)‖_∞."""
    if n < 1:
        raise InvalidArgumentError(f"n должно быть >= 1, получено {n}")
    return float(sum(operator_norm(b[j] - eval_trig(psi, j)) for j in range(n)) / n)


def mask_by_indicator(b: WeightSequence, k: Subsequence) -> WeightSequence:
    """
    c_j · b_j, где c_j = 1 при j ∈ k и 0 иначе. Центральность и граница сохраняются.
    """
    algebra = b.algebra
    zero: AlgebraElement = CenterElement(algebra, [0.0] * algebra.n_blocks) if b.is_central else algebra.zero()

    def generator(j: int) -> AlgebraElement:
        return b[j] if k.contains(j) else zero

    return WeightSequence(
        algebra,
        WeightKind.INDICATOR_MASKED,
        generator,
        b.bound,
        b.is_central,
        None,
        description=f"{b.description}·χ[{k.name}]",
    )


def central_shift_parts(b: AlgebraElement, bound: float) -> tuple:
    """
    Для центрального b с ‖b‖ <= C возвращает положительные центральные
    Re(b) + C и Im(b) + C; тогда b x = (Re b + C)x + i(Im b + C)x − (1 + i)Cx.
    """
    center = CenterElement.from_element(b)
    re = CenterElement(b.algebra, center.scalars.real + bound)
    im = CenterElement(b.algebra, center.scalars.imag + bound)
    return re, im


def central_shift_sequences(b: WeightSequence) -> Tuple[WeightSequence, WeightSequence]:
    """
    Последовательности {Re(b_j) + C} и {Im(b_j) + C}, C = sup_j ‖b_j‖.

    Обе центральны, положительны и ограничены 2C, поэтому для x >= 0
    и положительного T выполнено 0 <= A_n({Re(b_j) + C}, x) <= 2C · A_n(x).

    :raises InvalidArgumentError: Если веса нецентральны или не ограничены.
    """
    if not b.is_central or b.bound is None:
        raise InvalidArgumentError(f"Сдвиг определен только для центральных ограниченных весов: {b!r}")
    bound = float(b.bound)

    def component(index: int) -> Callable[[int], AlgebraElement]:
        return lambda j: central_shift_parts(b[j], bound)[index]

    re, im = (
        WeightSequence(
            b.algebra,
            WeightKind.CENTRAL_SCALAR,
            component(i),
            2 * bound,
            True,
            None,
            description=f"{name}({b.description})+C",
        )
        for i, name in enumerate(("Re", "Im"))
    )
    return re, im
