"""
Положительные операторы Данфорда-Шварца (DS⁺) на алгебре со следом.

Оператор задается одним из представлений: унитарное сопряжение, набор
Крауса, перестановка блоков, выпуклая комбинация или явная матрица
в координатах алгебры. Конструкторы `from_*` и `mix` проверяют входные
данные и прикладывают сертификат `verify_ds`.
"""
from __future__ import annotations

import logging
import threading
from abc import ABC, abstractmethod
from typing import Dict, Optional, Sequence

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel
from scipy import linalg

from .algebra import AlgebraElement, TracialAlgebra, operator_norm
from .errors import CertificationError, InvalidArgumentError
from .sampling import make_rng, random_element, random_positive

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-10
KRAUS_TOL = 1e-9
MATERIALIZE_THRESHOLD = 64
DEFAULT_CERT_SAMPLES = 16
DEFAULT_CERT_TOL = 1e-9


class DSCertificate(BaseModel):
    """Протокол проверки оператора: максимальные дефекты по всем проверкам."""

    samples: int
    """
    Что делает: Число случайных положительных и общих элементов в выборке.
    Форма: Целое >= 1.
    Пример: 16
    """
    tol: float
    positive: bool
    """
    Что делает: Проверялась ли положительность (и структурные условия DS⁺).
    Форма: Булево значение.
    Пример: true
    """
    positivity_defect: float = 0.0
    sup_norm_defect: float = 0.0
    trace_norm_defect: float = 0.0
    unitality_defect: float = 0.0
    """
    Что делает: max(0, λ_max(T(1)) − 1), структурная проверка T(1) <= 1.
    """
    trace_defect: float = 0.0
    """
    Что делает: max(0, λ_max(h) − 1), где τ(T(x)) = τ(h x); структурная проверка τ∘T <= τ.
    """

    @property
    def max_defect(self) -> float:
        return max(
            self.positivity_defect,
            self.sup_norm_defect,
            self.trace_norm_defect,
            self.unitality_defect,
            self.trace_defect,
        )


class DSOperator(ABC):
    """
    Линейное отображение алгебры в себя.

    Координатная матрица (размер Σd_i² × Σd_i²) строится лениво, степени
    двойки кешируются; кеш только дополняется и защищен блокировкой.
    """

    kind: str = "abstract"

    def __init__(self, algebra: TracialAlgebra):
        self._algebra = algebra
        self._certificate: Optional[DSCertificate] = None
        self._matrix: Optional[npt.NDArray[np.complex128]] = None
        self._squares: Dict[int, npt.NDArray[np.complex128]] = {}
        self._lock = threading.Lock()

    @property
    def algebra(self) -> TracialAlgebra:
        return self._algebra

    @property
    def certificate(self) -> Optional[DSCertificate]:
        return self._certificate

    @property
    def is_positive_map(self) -> bool:
        return True

    @property
    def is_certified_positive(self) -> bool:
        return self._certificate is not None and self._certificate.positive

    @abstractmethod
    def apply(self, x: AlgebraElement) -> AlgebraElement:
        """
        Применяет оператор к элементу.

        :param x: Элемент той же алгебры.
        :return: T(x).
        """
        pass

    def __call__(self, x: AlgebraElement) -> AlgebraElement:
        return self.apply(x)

    def certify(self, samples: int = DEFAULT_CERT_SAMPLES, tol: float = DEFAULT_CERT_TOL, seed: int = 0) -> "DSOperator":
        self._certificate = verify_ds(self, samples, tol, seed)
        return self

    def _check_algebra(self, x: AlgebraElement) -> None:
        if x.algebra != self._algebra:
            raise InvalidArgumentError("Элемент и оператор принадлежат разным алгебрам")

    def coordinate_matrix(self) -> npt.NDArray[np.complex128]:
        """Матрица T в координатах `AlgebraElement.to_vector`."""
        with self._lock:
            if self._matrix is None:
                dim = self._algebra.coordinate_dim
                columns = []
                for k in range(dim):
                    e = np.zeros(dim, dtype=np.complex128)
                    e[k] = 1.0
                    columns.append(self.apply(self._algebra.from_vector(e)).to_vector())
                matrix = np.stack(columns, axis=1)
                matrix.setflags(write=False)
                self._matrix = matrix
                logger.debug(f"Построена координатная матрица оператора '{self.kind}' размера {dim}×{dim}")
            return self._matrix

    def _square_power(self, level: int) -> npt.NDArray[np.complex128]:
        # T^(2^level), вычисляется повторным возведением в квадрат.
        base = self.coordinate_matrix()
        with self._lock:
            if not self._squares:
                self._squares[0] = base
            top = max(self._squares)
            while top < level:
                nxt = self._squares[top] @ self._squares[top]
                nxt.setflags(write=False)
                self._squares[top + 1] = nxt
                top += 1
            return self._squares[level]

    def power_matrix(self, j: int) -> npt.NDArray[np.complex128]:
        """Координатная матрица T^j."""
        if j < 0:
            raise InvalidArgumentError(f"Степень оператора должна быть >= 0, получено {j}")
        result = np.eye(self._algebra.coordinate_dim, dtype=np.complex128)
        level = 0
        while j:
            if j & 1:
                result = self._square_power(level) @ result
            j >>= 1
            level += 1
        return result

    def apply_power(self, j: int, x: AlgebraElement) -> AlgebraElement:
        return apply_power(self, j, x)

    def describe(self) -> str:
        return self.kind


class UnitaryConjugation(DSOperator):
    """T(x) = u* x u."""

    kind = "unitary"

    def __init__(self, u: AlgebraElement):
        super().__init__(u.algebra)
        self._u = u

    @property
    def unitary(self) -> AlgebraElement:
        return self._u

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        self._check_algebra(x)
        return self._u.adjoint() @ x @ self._u


class KrausChannel(DSOperator):
    """T(x) = Σ_i K_i x K_i*."""

    kind = "kraus"

    def __init__(self, kraus: Sequence[AlgebraElement]):
        if not kraus:
            raise InvalidArgumentError("Набор Крауса не может быть пустым")
        super().__init__(kraus[0].algebra)
        for k in kraus:
            self._check_algebra(k)
        self._kraus = tuple(kraus)

    @property
    def kraus(self) -> tuple:
        return self._kraus

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        self._check_algebra(x)
        blocks = [np.zeros_like(b) for b in x.blocks]
        for k in self._kraus:
            for i, (kb, xb) in enumerate(zip(k.blocks, x.blocks)):
                blocks[i] = blocks[i] + kb @ xb @ kb.conj().T
        return AlgebraElement._wrap(self._algebra, blocks)


class BlockPermutation(DSOperator):
    """T(x)_i = x_{π(i)} для перестановки блоков одинаковой размерности и веса."""

    kind = "permutation"

    def __init__(self, algebra: TracialAlgebra, permutation: Sequence[int]):
        super().__init__(algebra)
        self._perm = tuple(int(p) for p in permutation)

    @property
    def permutation(self) -> tuple:
        return self._perm

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        self._check_algebra(x)
        return AlgebraElement._wrap(self._algebra, [x.blocks[p] for p in self._perm])


class ConvexMixture(DSOperator):
    """T = Σ_i p_i T_i, p_i >= 0, Σ p_i = 1."""

    kind = "mix"

    def __init__(self, operators: Sequence[DSOperator], probabilities: Sequence[float]):
        if not operators:
            raise InvalidArgumentError("Выпуклая комбинация требует хотя бы одного оператора")
        super().__init__(operators[0].algebra)
        self._operators = tuple(operators)
        self._probabilities = tuple(float(p) for p in probabilities)

    @property
    def components(self) -> tuple:
        return tuple(zip(self._probabilities, self._operators))

    @property
    def is_positive_map(self) -> bool:
        return all(op.is_positive_map for op in self._operators)

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        self._check_algebra(x)
        total = self._algebra.zero()
        for p, op in zip(self._probabilities, self._operators):
            if p:
                total = total + p * op.apply(x)
        return total

    def describe(self) -> str:
        parts = ", ".join(f"{p:g}·{op.describe()}" for p, op in self.components)
        return f"mix({parts})"


class LinearMapOperator(DSOperator):
    """
    Оператор, заданный координатной матрицей. Положительность не
    предполагается: так задаются операторы Данфорда-Шварца без положительности.
    """

    kind = "matrix"

    def __init__(self, algebra: TracialAlgebra, matrix: npt.ArrayLike, positive: bool = False):
        super().__init__(algebra)
        m = np.array(matrix, dtype=np.complex128)
        dim = algebra.coordinate_dim
        if m.shape != (dim, dim):
            raise InvalidArgumentError(f"Матрица оператора должна иметь форму ({dim}, {dim}), получено {m.shape}")
        m.setflags(write=False)
        self._matrix = m
        self._positive = positive

    @property
    def is_positive_map(self) -> bool:
        return self._positive

    def apply(self, x: AlgebraElement) -> AlgebraElement:
        self._check_algebra(x)
        assert self._matrix is not None
        return self._algebra.from_vector(self._matrix @ x.to_vector())


# Конструкторы

def _unitarity_defect(u: AlgebraElement) -> float:
    one = u.algebra.identity()
    return max(operator_norm(u.adjoint() @ u - one), operator_norm(u @ u.adjoint() - one))


def from_unitary(u: AlgebraElement) -> UnitaryConjugation:
    """
    Оператор сопряжения T(x) = u* x u.

    :raises InvalidArgumentError: Если u не унитарен с точностью 1e-10.
    """
    defect = _unitarity_defect(u)
    if defect > UNITARY_TOL:
        raise InvalidArgumentError(f"Элемент не унитарен: ‖u*u − 1‖ ≈ {defect:.3e}")
    op = UnitaryConjugation(u)
    op.certify()
    return op


def from_kraus(kraus: Sequence[AlgebraElement]) -> KrausChannel:
    """
    Дважды стохастический канал T(x) = Σ K_i x K_i*.

    :raises InvalidArgumentError: Если Σ K_i* K_i != 1 или Σ K_i K_i* != 1 с точностью 1e-9;
        сообщение содержит норму дефекта.
    """
    if not kraus:
        raise InvalidArgumentError("Набор Крауса не может быть пустым")
    algebra = kraus[0].algebra
    one = algebra.identity()
    left = algebra.zero()
    right = algebra.zero()
    for k in kraus:
        if k.algebra != algebra:
            raise InvalidArgumentError("Операторы Крауса принадлежат разным алгебрам")
        left = left + k.adjoint() @ k
        right = right + k @ k.adjoint()
    trace_defect = operator_norm(left - one)
    unit_defect = operator_norm(right - one)
    if trace_defect > KRAUS_TOL:
        raise InvalidArgumentError(f"Нарушено Σ K*K = 1 (сохранение следа): дефект {trace_defect:.3e}")
    if unit_defect > KRAUS_TOL:
        raise InvalidArgumentError(f"Нарушено Σ KK* = 1 (унитальность): дефект {unit_defect:.3e}")
    op = KrausChannel(kraus)
    op.certify()
    return op


def from_permutation(algebra: TracialAlgebra, permutation: Sequence[int]) -> BlockPermutation:
    """
    Перестановка блоков.

    :raises InvalidArgumentError: Если это не перестановка или переставляемые
        блоки различаются размерностью или весом следа.
    """
    perm = [int(p) for p in permutation]
    if sorted(perm) != list(range(algebra.n_blocks)):
        raise InvalidArgumentError(f"{perm} не является перестановкой {algebra.n_blocks} блоков")
    for i, p in enumerate(perm):
        if algebra.block_dims[i] != algebra.block_dims[p]:
            raise InvalidArgumentError(f"Блоки {i} и {p} имеют разные размерности")
        if abs(algebra.trace_weights[i] - algebra.trace_weights[p]) > 1e-12:
            raise InvalidArgumentError(f"Блоки {i} и {p} имеют разные веса следа")
    op = BlockPermutation(algebra, perm)
    op.certify()
    return op


def mix(operators: Sequence[DSOperator], probabilities: Sequence[float]) -> ConvexMixture:
    """
    Выпуклая комбинация операторов.

    :raises InvalidArgumentError: Если веса отрицательны, не суммируются в 1
        или операторы заданы на разных алгебрах.
    """
    if len(operators) != len(probabilities) or not operators:
        raise InvalidArgumentError("Число операторов и весов должно совпадать и быть >= 1")
    if any(p < 0 for p in probabilities) or abs(sum(probabilities) - 1.0) > 1e-12:
        raise InvalidArgumentError(f"Веса смеси должны быть >= 0 и в сумме давать 1, получено {list(probabilities)}")
    algebra = operators[0].algebra
    if any(op.algebra != algebra for op in operators):
        raise InvalidArgumentError("Операторы смеси принадлежат разным алгебрам")
    op = ConvexMixture(operators, probabilities)
    op.certify()
    return op


def from_matrix(algebra: TracialAlgebra, matrix: npt.ArrayLike, positive: bool = False) -> LinearMapOperator:
    """Оператор по координатной матрице; сертификат проверяет только сжатия."""
    op = LinearMapOperator(algebra, matrix, positive)
    op.certify()
    return op


# Проверка и применение

def _trace_vector(algebra: TracialAlgebra) -> npt.NDArray[np.float64]:
    vec = np.zeros(algebra.coordinate_dim)
    offsets = algebra.block_offsets()
    for i, (d, w) in enumerate(zip(algebra.block_dims, algebra.trace_weights)):
        for a in range(d):
            vec[offsets[i] + a * d + a] = w
    return vec


def _trace_density(t: DSOperator) -> AlgebraElement:
    # h с τ(T(x)) = τ(h x): w_i · (h_i)_{ba} = τ(T(E_ab)).
    algebra = t.algebra
    g = _trace_vector(algebra) @ t.coordinate_matrix()
    offsets = algebra.block_offsets()
    blocks = []
    for i, (d, w) in enumerate(zip(algebra.block_dims, algebra.trace_weights)):
        blocks.append(g[offsets[i]:offsets[i + 1]].reshape(d, d).T / w)
    return AlgebraElement(algebra, blocks)


def _trace_norm(x: AlgebraElement) -> float:
    return float(sum(w * np.sum(linalg.svdvals(b)) for w, b in zip(x.algebra.trace_weights, x.blocks)))


def verify_ds(t: DSOperator, samples: int = DEFAULT_CERT_SAMPLES, tol: float = DEFAULT_CERT_TOL, seed: int = 0) -> DSCertificate:
    """
    Проверяет, что оператор сжимает L¹ и M, а для положительных отображений
    также положительность, T(1) <= 1 и τ(T(x)) <= τ(x) при x >= 0.

    :param t: Проверяемый оператор.
    :param samples: Число случайных положительных и общих элементов.
    :param tol: Допустимый дефект.
    :param seed: Зерно генератора выборки.
    :return: Сертификат с максимальными дефектами.
    :raises InvalidArgumentError: Если samples < 1.
    :raises CertificationError: Если какой-либо дефект превышает tol; несет элемент-свидетель.
    """
    if samples < 1:
        raise InvalidArgumentError(f"Число проб должно быть >= 1, получено {samples}")
    algebra = t.algebra
    rng = make_rng(seed)
    positive = t.is_positive_map
    defects = {
        "positivity_defect": 0.0,
        "sup_norm_defect": 0.0,
        "trace_norm_defect": 0.0,
        "unitality_defect": 0.0,
        "trace_defect": 0.0,
    }

    def record(name: str, value: float, witness: Optional[AlgebraElement]) -> None:
        defects[name] = max(defects[name], float(value))
        if value > tol:
            raise CertificationError(
                f"Оператор '{t.describe()}' не прошел проверку DS: {name} = {value:.3e} > {tol:.1e}",
                witness=witness,
                defects=dict(defects),
            )

    if positive:
        record("unitality_defect", max(0.0, t.apply(algebra.identity()).max_eigenvalue() - 1.0), algebra.identity())
        record("trace_defect", max(0.0, _trace_density(t).real_part().max_eigenvalue() - 1.0), None)

    for _ in range(samples):
        xp = random_positive(rng, algebra)
        txp = t.apply(xp)
        if positive:
            record("positivity_defect", max(0.0, -txp.real_part().min_eigenvalue()), xp)
        record("sup_norm_defect", operator_norm(txp) - operator_norm(xp), xp)
        record("trace_norm_defect", _trace_norm(txp) - _trace_norm(xp), xp)

        xg = random_element(rng, algebra)
        txg = t.apply(xg)
        record("sup_norm_defect", operator_norm(txg) - operator_norm(xg), xg)
        record("trace_norm_defect", _trace_norm(txg) - _trace_norm(xg), xg)

    logger.debug(f"Оператор '{t.describe()}' сертифицирован: дефекты {defects}")
    return DSCertificate(samples=samples, tol=tol, positive=positive, **defects)


def apply_power(t: DSOperator, j: int, x: AlgebraElement) -> AlgebraElement:
    """
    T^j(x). При (Σd_i)² > 64 используется кешированная координатная
    матрица и повторное возведение в квадрат, иначе T применяется j раз.

    :raises InvalidArgumentError: Если j < 0.
    """
    if j < 0:
        raise InvalidArgumentError(f"Степень оператора должна быть >= 0, получено {j}")
    t._check_algebra(x)
    if j == 0:
        return x
    if t.algebra.total_dim**2 > MATERIALIZE_THRESHOLD:
        return t.algebra.from_vector(t.power_matrix(j) @ x.to_vector())
    y = x
    for _ in range(j):
        y = t.apply(y)
    return y


def identity_operator(algebra: TracialAlgebra) -> UnitaryConjugation:
    return from_unitary(algebra.identity())
