"""
Этот модуль содержит конечномерную модель полуконечной алгебры фон Неймана
со следом: прямую сумму полных матричных блоков M_{d_1} ⊕ ... ⊕ M_{d_k},
в которой след блока i умножается на положительный вес w_i.

Здесь же живут элементы алгебры, проекции, элементы центра, спектральное
разложение, функциональное исчисление и порядок на самосопряженных элементах.
"""
from __future__ import annotations

import logging
import numbers
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator
from scipy import linalg

from .errors import DomainError, InvalidArgumentError, PreconditionError

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]

PROJECTION_TOL = 1e-10
MEET_RANK_TOL = 1e-10
CLUSTER_REL_TOL = 1e-8
SELF_ADJOINT_TOL = 1e-10


class TracialAlgebra(BaseModel):
    """
    Алгебра M = ⊕_i M_{d_i}(C) со следом τ(x) = Σ_i w_i · Tr(x_i).

    Неизменяемая модель: может свободно разделяться между потоками.
    """
    model_config = ConfigDict(frozen=True)

    block_dims: Tuple[int, ...]
    """
    Что делает: Размерности матричных блоков.
    Форма: Кортеж положительных целых чисел.
    Пример: (2, 1)
    """
    trace_weights: Tuple[float, ...]
    """
    Что делает: Вес следа каждого блока; умножает стандартный матричный след.
    Форма: Кортеж положительных вещественных чисел той же длины.
    Пример: (1.0, 2.0)
    """

    @field_validator("block_dims")
    @classmethod
    def validate_dims(cls, v: Tuple[int, ...]) -> Tuple[int, ...]:
        if not v:
            raise ValueError("Список размерностей блоков не может быть пустым")
        if any(d < 1 for d in v):
            raise ValueError(f"Размерности блоков должны быть >= 1, получено: {list(v)}")
        return v

    @field_validator("trace_weights")
    @classmethod
    def validate_weights(cls, v: Tuple[float, ...]) -> Tuple[float, ...]:
        if any(not np.isfinite(w) or w <= 0 for w in v):
            raise ValueError(f"Веса следа должны быть конечными и > 0, получено: {list(v)}")
        return v

    @model_validator(mode="after")
    def validate_lengths(self) -> "TracialAlgebra":
        if len(self.block_dims) != len(self.trace_weights):
            raise ValueError(
                f"Число весов ({len(self.trace_weights)}) не совпадает "
                f"с числом блоков ({len(self.block_dims)})"
            )
        return self

    @property
    def n_blocks(self) -> int:
        return len(self.block_dims)

    @property
    def tau_one(self) -> float:
        """τ(1) = Σ_i w_i · d_i."""
        return float(sum(w * d for w, d in zip(self.trace_weights, self.block_dims)))

    @property
    def total_dim(self) -> int:
        return int(sum(self.block_dims))

    @property
    def coordinate_dim(self) -> int:
        """Размерность алгебры как векторного пространства: Σ_i d_i²."""
        return int(sum(d * d for d in self.block_dims))

    def block_offsets(self) -> List[int]:
        """Смещения блоков в координатном векторе (row-major внутри блока)."""
        offsets = [0]
        for d in self.block_dims:
            offsets.append(offsets[-1] + d * d)
        return offsets

    def identity(self) -> "AlgebraElement":
        return AlgebraElement._wrap(self, [np.eye(d, dtype=np.complex128) for d in self.block_dims])

    def zero(self) -> "AlgebraElement":
        return AlgebraElement._wrap(self, [np.zeros((d, d), dtype=np.complex128) for d in self.block_dims])

    def element(self, blocks: Sequence[Any]) -> "AlgebraElement":
        return AlgebraElement(self, blocks)

    def diag(self, *diagonals: Sequence[complex]) -> "AlgebraElement":
        """
        Строит блочно-диагональный элемент по диагоналям блоков.

        :param diagonals: По одной последовательности диагональных элементов на блок.
        :return: Элемент diag(...) ⊕ diag(...) ⊕ ...
        """
        if len(diagonals) != self.n_blocks:
            raise InvalidArgumentError(
                f"Ожидалось {self.n_blocks} диагоналей, получено {len(diagonals)}"
            )
        return AlgebraElement(self, [np.diag(np.asarray(d, dtype=np.complex128)) for d in diagonals])

    def unit(self, block: int, row: int, col: int) -> "AlgebraElement":
        """Матричная единица E_{row,col} в блоке `block`."""
        blocks = [np.zeros((d, d), dtype=np.complex128) for d in self.block_dims]
        blocks[block][row, col] = 1.0
        return AlgebraElement._wrap(self, blocks)

    def central(self, scalars: Sequence[complex]) -> "CenterElement":
        return CenterElement(self, scalars)

    def from_vector(self, vector: npt.ArrayLike) -> "AlgebraElement":
        """Обратная операция к `AlgebraElement.to_vector`."""
        vec = np.asarray(vector, dtype=np.complex128)
        if vec.shape != (self.coordinate_dim,):
            raise InvalidArgumentError(
                f"Координатный вектор должен иметь длину {self.coordinate_dim}, получено {vec.shape}"
            )
        offsets = self.block_offsets()
        blocks = [
            vec[offsets[i]:offsets[i + 1]].reshape(d, d).copy()
            for i, d in enumerate(self.block_dims)
        ]
        return AlgebraElement._wrap(self, blocks)

    def to_dict(self) -> Dict[str, Any]:
        return {"dims": list(self.block_dims), "weights": list(self.trace_weights)}


def make_algebra(block_dims: Sequence[int], trace_weights: Sequence[float]) -> TracialAlgebra:
    """
    Создает алгебру со следом и проверяет ее инварианты.

    :param block_dims: Размерности блоков.
    :param trace_weights: Положительные веса следа.
    :return: Неизменяемая `TracialAlgebra`.
    :raises InvalidArgumentError: Если размерность или вес неположительны либо списки разной длины.
    """
    try:
        algebra = TracialAlgebra(block_dims=tuple(block_dims), trace_weights=tuple(trace_weights))
    except ValidationError as e:
        raise InvalidArgumentError(f"Некорректное описание алгебры: {e}") from e
    logger.debug(f"Создана алгебра dims={list(algebra.block_dims)}, τ(1)={algebra.tau_one}")
    return algebra


def _is_scalar(value: Any) -> bool:
    return isinstance(value, numbers.Number) or (isinstance(value, np.generic) and np.isscalar(value))


def _hermitize(block: ComplexMatrix) -> ComplexMatrix:
    return (block + block.conj().T) / 2


class AlgebraElement:
    """
    Элемент алгебры: по одной комплексной квадратной матрице на блок.

    Элементы неизменяемы (массивы блоков защищены от записи), все
    арифметические операции возвращают новые элементы. Умножение
    элементов записывается через `@`, умножение на скаляр через `*`.
    """

    __slots__ = ("_algebra", "_blocks")

    def __init__(self, algebra: TracialAlgebra, blocks: Sequence[Any]):
        if len(blocks) != algebra.n_blocks:
            raise InvalidArgumentError(
                f"Ожидалось {algebra.n_blocks} блоков, получено {len(blocks)}"
            )
        arrays = []
        for i, (block, d) in enumerate(zip(blocks, algebra.block_dims)):
            arr = np.array(block, dtype=np.complex128)
            if arr.shape != (d, d):
                raise InvalidArgumentError(
                    f"Блок {i} должен иметь форму ({d}, {d}), получено {arr.shape}"
                )
            if not np.all(np.isfinite(arr)):
                raise InvalidArgumentError(f"Блок {i} содержит нечисловые значения")
            arr.setflags(write=False)
            arrays.append(arr)
        self._algebra = algebra
        self._blocks: Tuple[ComplexMatrix, ...] = tuple(arrays)

    @classmethod
    def _wrap(cls, algebra: TracialAlgebra, blocks: Sequence[ComplexMatrix]) -> "AlgebraElement":
        # Быстрый путь без проверок для результатов внутренних вычислений.
        obj = object.__new__(AlgebraElement)
        frozen = []
        for b in blocks:
            arr = np.asarray(b, dtype=np.complex128)
            arr.setflags(write=False)
            frozen.append(arr)
        obj._algebra = algebra
        obj._blocks = tuple(frozen)
        return obj

    @property
    def algebra(self) -> TracialAlgebra:
        return self._algebra

    @property
    def blocks(self) -> Tuple[ComplexMatrix, ...]:
        return self._blocks

    def _check_same_algebra(self, other: "AlgebraElement") -> None:
        if other.algebra != self.algebra:
            raise InvalidArgumentError(
                f"Элементы принадлежат разным алгебрам: dims={list(self.algebra.block_dims)} "
                f"и dims={list(other.algebra.block_dims)}"
            )

    # Арифметика

    def __add__(self, other: Any) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            self._check_same_algebra(other)
            return AlgebraElement._wrap(self.algebra, [a + b for a, b in zip(self._blocks, other._blocks)])
        if _is_scalar(other):
            return AlgebraElement._wrap(
                self.algebra, [a + complex(other) * np.eye(a.shape[0]) for a in self._blocks]
            )
        return NotImplemented

    def __radd__(self, other: Any) -> "AlgebraElement":
        return self.__add__(other)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement._wrap(self.algebra, [-a for a in self._blocks])

    def __sub__(self, other: Any) -> "AlgebraElement":
        if isinstance(other, AlgebraElement) or _is_scalar(other):
            return self.__add__(-other)
        return NotImplemented

    def __rsub__(self, other: Any) -> "AlgebraElement":
        return (-self).__add__(other)

    def __mul__(self, other: Any) -> "AlgebraElement":
        if _is_scalar(other):
            c = complex(other)
            return AlgebraElement._wrap(self.algebra, [c * a for a in self._blocks])
        return NotImplemented

    def __rmul__(self, other: Any) -> "AlgebraElement":
        return self.__mul__(other)

    def __truediv__(self, other: Any) -> "AlgebraElement":
        if _is_scalar(other):
            return self.__mul__(1.0 / complex(other))
        return NotImplemented

    def __matmul__(self, other: "AlgebraElement") -> "AlgebraElement":
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        self._check_same_algebra(other)
        return AlgebraElement._wrap(self.algebra, [a @ b for a, b in zip(self._blocks, other._blocks)])

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement._wrap(self.algebra, [a.conj().T for a in self._blocks])

    @property
    def H(self) -> "AlgebraElement":
        return self.adjoint()

    def power(self, k: int) -> "AlgebraElement":
        """x^k для целого k >= 0 (блочно, повторным возведением в квадрат)."""
        if k < 0:
            raise InvalidArgumentError(f"Степень должна быть >= 0, получено {k}")
        return AlgebraElement._wrap(self.algebra, [np.linalg.matrix_power(a, k) for a in self._blocks])

    # Числовые характеристики

    def trace(self) -> complex:
        return trace(self)

    def operator_norm(self) -> float:
        return operator_norm(self)

    def distance(self, other: "AlgebraElement") -> float:
        """‖x − y‖_∞."""
        return operator_norm(self - other)

    def max_abs_entry(self) -> float:
        return float(max(np.max(np.abs(a)) for a in self._blocks))

    def is_self_adjoint(self, tol: float = SELF_ADJOINT_TOL) -> bool:
        return all(np.max(np.abs(a - a.conj().T)) <= tol for a in self._blocks)

    def is_central(self, tol: float = 1e-12) -> bool:
        """True, если каждый блок является скалярным кратным единицы."""
        for a in self._blocks:
            c = a[0, 0]
            if np.max(np.abs(a - c * np.eye(a.shape[0]))) > tol:
                return False
        return True

    def real_part(self) -> "AlgebraElement":
        """Re x = (x + x*) / 2."""
        return AlgebraElement._wrap(self.algebra, [_hermitize(a) for a in self._blocks])

    def imag_part(self) -> "AlgebraElement":
        """Im x = (x − x*) / 2i."""
        return AlgebraElement._wrap(self.algebra, [(a - a.conj().T) / 2j for a in self._blocks])

    def abs(self) -> "AlgebraElement":
        """|x| = (x*x)^{1/2}."""
        blocks = []
        for a in self._blocks:
            vals, vecs = linalg.eigh(_hermitize(a.conj().T @ a))
            root = np.sqrt(np.clip(vals, 0.0, None))
            blocks.append((vecs * root) @ vecs.conj().T)
        return AlgebraElement._wrap(self.algebra, blocks)

    def positive_part(self) -> "AlgebraElement":
        """x₊ для самосопряженного x."""
        return _spectral_map(self, lambda v: np.clip(v, 0.0, None))

    def negative_part(self) -> "AlgebraElement":
        """x₋ = (−x)₊, так что x = x₊ − x₋."""
        return _spectral_map(self, lambda v: np.clip(-v, 0.0, None))

    def min_eigenvalue(self) -> float:
        return float(min(linalg.eigvalsh(_hermitize(a))[0] for a in self._blocks))

    def max_eigenvalue(self) -> float:
        return float(max(linalg.eigvalsh(_hermitize(a))[-1] for a in self._blocks))

    # Сериализация

    def to_vector(self) -> npt.NDArray[np.complex128]:
        return np.concatenate([a.ravel() for a in self._blocks])

    def to_dict(self) -> Dict[str, Any]:
        """
        Сериализует элемент вместе с алгеброй:
        {"blocks": [[строки пар [re, im]]], "dims": [...], "weights": [...]}.
        """
        return {
            "blocks": [
                [[[float(z.real), float(z.imag)] for z in row] for row in a]
                for a in self._blocks
            ],
            **self.algebra.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AlgebraElement":
        try:
            algebra = make_algebra(data["dims"], data["weights"])
            blocks = [
                np.array([[complex(re, im) for re, im in row] for row in block], dtype=np.complex128)
                .reshape(d, d)
                for block, d in zip(data["blocks"], algebra.block_dims)
            ]
        except (KeyError, TypeError, ValueError) as e:
            if isinstance(e, InvalidArgumentError):
                raise
            raise InvalidArgumentError(f"Некорректная сериализация элемента: {e}") from e
        return AlgebraElement(algebra, blocks)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dims={list(self.algebra.block_dims)}, norm={self.operator_norm():.6g})"


class Projection(AlgebraElement):
    """
    Проекция e = e* = e². Проверяется поэлементно с допуском `PROJECTION_TOL`.
    """

    __slots__ = ()

    def __init__(self, algebra: TracialAlgebra, blocks: Sequence[Any], tol: float = PROJECTION_TOL):
        super().__init__(algebra, blocks)
        for i, a in enumerate(self._blocks):
            if np.max(np.abs(a - a.conj().T), initial=0.0) > tol:
                raise InvalidArgumentError(f"Блок {i} проекции не самосопряжен")
            if np.max(np.abs(a @ a - a), initial=0.0) > tol:
                raise InvalidArgumentError(f"Блок {i} проекции не идемпотентен")

    @classmethod
    def identity(cls, algebra: TracialAlgebra) -> "Projection":
        return cls(algebra, [np.eye(d) for d in algebra.block_dims])

    @classmethod
    def zero(cls, algebra: TracialAlgebra) -> "Projection":
        return cls(algebra, [np.zeros((d, d)) for d in algebra.block_dims])

    @classmethod
    def from_ranges(cls, algebra: TracialAlgebra, bases: Sequence[npt.ArrayLike]) -> "Projection":
        """
        Проекция на линейные оболочки ортонормированных столбцов.

        :param bases: По одной матрице d_i × r_i с ортонормированными столбцами на блок.
        """
        blocks = []
        for q, d in zip(bases, algebra.block_dims):
            q = np.asarray(q, dtype=np.complex128).reshape(d, -1)
            blocks.append(q @ q.conj().T)
        return cls(algebra, blocks)

    def complement(self) -> "Projection":
        """e⊥ = 1 − e."""
        return Projection(self.algebra, [np.eye(a.shape[0]) - a for a in self._blocks])

    @property
    def mass(self) -> float:
        """τ(e)."""
        return float(trace(self).real)

    @property
    def complement_mass(self) -> float:
        """τ(e⊥) = τ(1) − τ(e)."""
        return float(self.algebra.tau_one - self.mass)

    def range_bases(self) -> List[ComplexMatrix]:
        """Ортонормированные базисы образов по блокам."""
        bases = []
        for a in self._blocks:
            vals, vecs = linalg.eigh(_hermitize(a))
            bases.append(vecs[:, vals > 0.5])
        return bases

    def meet(self, other: "Projection") -> "Projection":
        return projection_meet(self, other)

    def compress(self, x: AlgebraElement) -> AlgebraElement:
        """e x e."""
        return self @ x @ self


class CenterElement(AlgebraElement):
    """
    Элемент центра Z(M): скаляр z_i, умноженный на единицу блока i.

    Коммутирует с любым элементом алгебры точно, по построению.
    """

    __slots__ = ("_scalars",)

    def __init__(self, algebra: TracialAlgebra, scalars: Sequence[complex]):
        values = np.asarray(scalars, dtype=np.complex128)
        if values.shape != (algebra.n_blocks,):
            raise InvalidArgumentError(
                f"Элемент центра задается {algebra.n_blocks} скалярами, получено {values.shape}"
            )
        super().__init__(algebra, [z * np.eye(d) for z, d in zip(values, algebra.block_dims)])
        values.setflags(write=False)
        self._scalars = values

    @property
    def scalars(self) -> npt.NDArray[np.complex128]:
        return self._scalars

    @classmethod
    def from_element(cls, x: AlgebraElement, tol: float = 1e-12) -> "CenterElement":
        """Приводит центральный элемент к виду `CenterElement`."""
        if isinstance(x, CenterElement):
            return x
        if not x.is_central(tol):
            raise InvalidArgumentError("Элемент не лежит в центре алгебры")
        return cls(x.algebra, [a[0, 0] for a in x.blocks])


@dataclass(frozen=True)
class SpectralDecomposition:
    """
    Спектральное разложение x = Σ λ_i e_i самосопряженного элемента.

    Собственные значения упорядочены по убыванию, кластеры близких
    значений объединены в одну собственную проекцию.
    """
    eigenvalues: Tuple[float, ...]
    eigenprojections: Tuple[Projection, ...]
    trace_masses: Tuple[float, ...]

    def reconstruct(self) -> AlgebraElement:
        algebra = self.eigenprojections[0].algebra
        total = algebra.zero()
        for value, e in zip(self.eigenvalues, self.eigenprojections):
            total = total + value * e
        return total


# Операции

def trace(x: AlgebraElement) -> complex:
    """τ(x) = Σ_i w_i · Tr(x_i)."""
    return complex(sum(w * np.trace(a) for w, a in zip(x.algebra.trace_weights, x.blocks)))


def operator_norm(x: AlgebraElement) -> float:
    """Наибольшее сингулярное число по всем блокам."""
    return float(max(linalg.norm(a, 2) if a.size else 0.0 for a in x.blocks))


def _require_self_adjoint(x: AlgebraElement, tol: float, what: str) -> None:
    defect = max(float(np.max(np.abs(a - a.conj().T))) for a in x.blocks)
    if defect > tol:
        raise PreconditionError(f"{what}: элемент не самосопряжен (‖x − x*‖ ≈ {defect:.3e})")


def _sa_tolerance(x: AlgebraElement, tol: Optional[float] = None) -> float:
    base = SELF_ADJOINT_TOL * max(1.0, x.max_abs_entry())
    return max(base, tol or 0.0)


def _spectral_map(
    x: AlgebraElement, fn: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.float64]]
) -> AlgebraElement:
    # Векторизованное функциональное исчисление без проверки области определения.
    blocks = []
    for a in x.blocks:
        vals, vecs = linalg.eigh(_hermitize(a))
        blocks.append((vecs * fn(vals)) @ vecs.conj().T)
    return AlgebraElement._wrap(x.algebra, blocks)


def spectral_decomposition(x: AlgebraElement, tol: Optional[float] = None) -> SpectralDecomposition:
    """
    Вычисляет спектральное разложение самосопряженного элемента.

    Собственные значения, отличающиеся от первого значения кластера не более
    чем на `tol`, объединяются; значение кластера равно среднему, взвешенному
    следовыми массами.

    :param x: Самосопряженный элемент.
    :param tol: Допуск кластеризации; по умолчанию 1e-8 · ‖x‖.
    :raises PreconditionError: Если x не самосопряжен.
    """
    norm = operator_norm(x)
    if tol is None:
        tol = CLUSTER_REL_TOL * norm
    _require_self_adjoint(x, _sa_tolerance(x, tol), "spectral_decomposition")

    entries: List[Tuple[float, int, ComplexMatrix]] = []
    for i, a in enumerate(x.blocks):
        vals, vecs = linalg.eigh(_hermitize(a))
        for k in range(len(vals)):
            entries.append((float(vals[k]), i, vecs[:, k]))
    entries.sort(key=lambda e: -e[0])

    clusters: List[List[Tuple[float, int, ComplexMatrix]]] = []
    for entry in entries:
        if clusters and clusters[-1][0][0] - entry[0] <= tol:
            clusters[-1].append(entry)
        else:
            clusters.append([entry])

    algebra = x.algebra
    eigenvalues, projections, masses = [], [], []
    for cluster in clusters:
        blocks = [np.zeros((d, d), dtype=np.complex128) for d in algebra.block_dims]
        mass = 0.0
        weighted = 0.0
        for value, i, v in cluster:
            blocks[i] += np.outer(v, v.conj())
            w = algebra.trace_weights[i]
            mass += w
            weighted += w * value
        eigenvalues.append(weighted / mass)
        projections.append(Projection(algebra, blocks))
        masses.append(mass)
    return SpectralDecomposition(tuple(eigenvalues), tuple(projections), tuple(masses))


def functional_calculus(f: Callable[[float], float], x: AlgebraElement) -> AlgebraElement:
    """
    Вычисляет f(x) = Σ f(λ_i) e_i для самосопряженного x.

    :param f: Вещественная функция одного аргумента.
    :param x: Самосопряженный элемент.
    :raises PreconditionError: Если x не самосопряжен.
    :raises DomainError: Если f не определена в точке спектра.
    """
    _require_self_adjoint(x, _sa_tolerance(x), "functional_calculus")
    blocks = []
    for a in x.blocks:
        vals, vecs = linalg.eigh(_hermitize(a))
        mapped = np.empty_like(vals)
        for k, v in enumerate(vals):
            try:
                with np.errstate(all="raise"):
                    mapped[k] = float(f(float(v)))
            except (ValueError, ArithmeticError, FloatingPointError) as e:
                raise DomainError(f"Функция не определена в точке спектра {v:.6g}: {e}") from e
            if not np.isfinite(mapped[k]):
                raise DomainError(f"Функция принимает нечисловое значение в точке спектра {v:.6g}")
        blocks.append((vecs * mapped) @ vecs.conj().T)
    return AlgebraElement._wrap(x.algebra, blocks)


def spectral_projection(
    x: AlgebraElement, predicate: Callable[[npt.NDArray[np.float64]], npt.NDArray[np.bool_]]
) -> Projection:
    """
    Спектральная проекция самосопряженного x на собственные значения,
    удовлетворяющие `predicate` (векторизованному по массиву значений).

    Пример: `spectral_projection(x, lambda v: v > s)` дает χ_(s,∞)(x).
    """
    _require_self_adjoint(x, _sa_tolerance(x), "spectral_projection")
    bases = []
    for a in x.blocks:
        vals, vecs = linalg.eigh(_hermitize(a))
        bases.append(vecs[:, np.asarray(predicate(vals), dtype=bool)])
    return Projection.from_ranges(x.algebra, bases)


def order_leq(x: AlgebraElement, y: AlgebraElement, tol: float = 1e-10) -> bool:
    """
    Порядок на самосопряженных элементах: x <= y, если наименьшее
    собственное значение y − x не меньше −tol.
    """
    x._check_same_algebra(y)
    diff = y - x
    _require_self_adjoint(diff, _sa_tolerance(diff, tol), "order_leq")
    return diff.min_eigenvalue() >= -tol


def projection_meet(e: Projection, f: Projection) -> Projection:
    """
    Пересечение e ∧ f: проекция на пересечение образов.

    Образ пересечения совпадает с ядром положительного элемента e⊥ + f⊥,
    которое находится ранго-выявляющим SVD с порогом `MEET_RANK_TOL`.
    """
    e._check_same_algebra(f)
    bases = []
    for a, b in zip(e.blocks, f.blocks):
        d = a.shape[0]
        gap = 2 * np.eye(d) - a - b
        bases.append(linalg.null_space(_hermitize(gap), rcond=MEET_RANK_TOL))
    return Projection.from_ranges(e.algebra, bases)


def projection_meet_all(projections: Sequence[Projection]) -> Projection:
    if not projections:
        raise InvalidArgumentError("Пересечение пустого набора проекций не определено")
    result = projections[0]
    for p in projections[1:]:
        result = projection_meet(result, p)
    return result
