"""
Эргодические средние

    A_n({b_j},{d_j},x)   = (1/n) Σ_{j<n} T^j(b_j x d_j),
    A_n^k({b_j},{d_j},x) = (1/n) Σ_{j<n} T^{k_j}(b_{k_j} x d_{k_j}),
    M_n({b_j},{d_j},x)   = (1/k_n) Σ_{j<n} T^{k_j}(b_{k_j} x d_{k_j}),

их инкрементальное вычисление и проверка тождества переписывания
A_n^k({b_j}, x) = ((k_{n−1}+1)/n) · A_{k_{n−1}+1}({c_j b_j}, x).
"""
from __future__ import annotations

import logging
from typing import Iterator, List, Optional, Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, ValidationError, model_validator

from .algebra import AlgebraElement, operator_norm
from .errors import CertificationError, HypothesisViolationError, InvalidArgumentError, PreconditionError
from .operators import DSOperator
from .subsequences import Subsequence
from .weights import WeightSequence, mask_by_indicator, unit_weights

logger = logging.getLogger(__name__)

REFRESH_PERIOD = 256
DRIFT_TOL = 1e-9
REWRITE_TOL = 1e-12


class AverageRequest(BaseModel):
    """Описание семейства средних для одного элемента x."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    operator: DSOperator
    """
    Что делает: Положительный оператор Данфорда-Шварца T.
    Форма: Сертифицированный `DSOperator`.
    """
    element: AlgebraElement
    left: Optional[WeightSequence] = None
    """
    Что делает: Левые веса {b_j}; отсутствие означает b_j = 1.
    Форма: `WeightSequence` над алгеброй оператора или None.
    """
    right: Optional[WeightSequence] = None
    """
    Что делает: Правые веса {d_j}; отсутствие означает d_j = 1.
    """
    subsequence: Optional[Subsequence] = None
    n_max: int = 64
    """
    Что делает: Наибольший номер n, для которого запрашиваются средние.
    Форма: Целое >= 1.
    Пример: 64
    """

    @model_validator(mode="after")
    def validate_consistency(self) -> "AverageRequest":
        algebra = self.operator.algebra
        if self.element.algebra != algebra:
            raise ValueError("Элемент x не принадлежит алгебре оператора")
        for name, weights in (("левые", self.left), ("правые", self.right)):
            if weights is not None and weights.algebra != algebra:
                raise ValueError(f"{name.capitalize()} веса не принадлежат алгебре оператора")
        if self.n_max < 1:
            raise ValueError(f"n_max должно быть >= 1, получено {self.n_max}")
        if self.subsequence is not None and not self.subsequence.supports_horizon(self.n_max):
            raise ValueError(f"Подпоследовательность '{self.subsequence.name}' короче горизонта {self.n_max}")
        return self

    @property
    def is_one_sided(self) -> bool:
        return self.right is None

    def with_changes(self, **changes: object) -> "AverageRequest":
        data = {
            "operator": self.operator,
            "element": self.element,
            "left": self.left,
            "right": self.right,
            "subsequence": self.subsequence,
            "n_max": self.n_max,
        }
        data.update(changes)
        return make_request(**data)  # type: ignore[arg-type]


def make_request(
    operator: DSOperator,
    element: AlgebraElement,
    left: Optional[WeightSequence] = None,
    right: Optional[WeightSequence] = None,
    subsequence: Optional[Subsequence] = None,
    n_max: int = 64,
) -> AverageRequest:
    """
    Создает запрос и проверяет согласованность алгебр.

    :raises InvalidArgumentError: Несовпадение алгебр, n_max < 1 или слишком короткая подпоследовательность.
    """
    try:
        return AverageRequest(
            operator=operator, element=element, left=left, right=right, subsequence=subsequence, n_max=n_max
        )
    except ValidationError as e:
        raise InvalidArgumentError(f"Некорректный запрос на вычисление средних: {e}") from e


class RunningAverage:
    """
    Накопитель S = Σ T^{e_j}(y_j) по неубывающим показателям e_j.

    Матрица P = T^e продвигается умножением на координатную матрицу T;
    каждые 256 шагов она пересчитывается заново и расхождение сравнивается с 1e-9.
    """

    def __init__(self, operator: DSOperator):
        self._operator = operator
        self._step = operator.coordinate_matrix()
        dim = operator.algebra.coordinate_dim
        self._power = np.eye(dim, dtype=np.complex128)
        self._exponent = 0
        self._sum = np.zeros(dim, dtype=np.complex128)
        self.max_drift = 0.0

    @property
    def exponent(self) -> int:
        return self._exponent

    def _advance_to(self, exponent: int) -> None:
        if exponent < self._exponent:
            raise InvalidArgumentError("Показатели степеней должны не убывать")
        while self._exponent < exponent:
            self._power = self._step @ self._power
            self._exponent += 1
            if self._exponent % REFRESH_PERIOD == 0:
                fresh = self._operator.power_matrix(self._exponent)
                drift = float(np.max(np.abs(fresh - self._power)))
                self.max_drift = max(self.max_drift, drift)
                if drift > DRIFT_TOL:
                    logger.warning(f"Расхождение степени T^{self._exponent}: {drift:.3e} > {DRIFT_TOL:.0e}")
                else:
                    logger.debug(f"Пересчет T^{self._exponent}: расхождение {drift:.3e}")
                self._power = fresh

    def add(self, exponent: int, term: Optional[npt.NDArray[np.complex128]]) -> None:
        self._advance_to(exponent)
        if term is not None:
            self._sum = self._sum + self._power @ term

    @property
    def total(self) -> npt.NDArray[np.complex128]:
        return self._sum


def _require_positive_operator(req: AverageRequest) -> None:
    if not req.operator.is_certified_positive:
        raise HypothesisViolationError(
            "positive-ds", f"оператор '{req.operator.describe()}' не сертифицирован как положительный DS-оператор"
        )


def _term(req: AverageRequest, index: int) -> Optional[npt.NDArray[np.complex128]]:
    y = req.element
    if req.left is not None:
        y = req.left[index] @ y
    if req.right is not None:
        y = y @ req.right[index]
    return y.to_vector()


def _indices(req: AverageRequest, subsequential: bool, n: int) -> List[int]:
    if not subsequential:
        return list(range(n))
    if req.subsequence is None:
        raise PreconditionError("Для подпоследовательных средних требуется подпоследовательность")
    return req.subsequence.take(n)


def iter_partial_sums(
    req: AverageRequest, subsequential: bool = False, n: Optional[int] = None
) -> Iterator[Tuple[int, npt.NDArray[np.complex128]]]:
    """
    Порождает (n, S_n) для n = 1, ..., n, где S_n = Σ_{j<n} T^{e_j}(y_{e_j}).
    """
    _require_positive_operator(req)
    horizon = req.n_max if n is None else n
    if not 1 <= horizon <= req.n_max:
        raise InvalidArgumentError(f"n должно лежать в [1, {req.n_max}], получено {horizon}")
    acc = RunningAverage(req.operator)
    for count, index in enumerate(_indices(req, subsequential, horizon), start=1):
        acc.add(index, _term(req, index))
        yield count, acc.total


def iter_averages(req: AverageRequest, subsequential: bool = False, n: Optional[int] = None) -> Iterator[AlgebraElement]:
    """Порождает A_1, ..., A_n (или A_1^k, ..., A_n^k)."""
    algebra = req.operator.algebra
    for count, total in iter_partial_sums(req, subsequential, n):
        yield algebra.from_vector(total / count)


def average_sequence(req: AverageRequest, subsequential: bool = False, n: Optional[int] = None) -> List[AlgebraElement]:
    return list(iter_averages(req, subsequential, n))


def _final_sum(req: AverageRequest, subsequential: bool, n: int) -> npt.NDArray[np.complex128]:
    total = None
    for _, total in iter_partial_sums(req, subsequential, n):
        pass
    assert total is not None
    return total


def average(req: AverageRequest, n: int) -> AlgebraElement:
    """
    A_n({b_j},{d_j},x) = (1/n) Σ_{j<n} T^j(b_j x d_j).

    :raises InvalidArgumentError: Если n вне [1, n_max].
    """
    return req.operator.algebra.from_vector(_final_sum(req, False, n) / n)


def subsequential_average(req: AverageRequest, n: int) -> AlgebraElement:
    """
    A_n^k({b_j},{d_j},x) = (1/n) Σ_{j<n} T^{k_j}(b_{k_j} x d_{k_j}).

    :raises PreconditionError: Если в запросе нет подпоследовательности.
    """
    return req.operator.algebra.from_vector(_final_sum(req, True, n) / n)


def m_average(req: AverageRequest, n: int) -> AlgebraElement:
    """
    M_n = (1/k_n) Σ_{j<n} T^{k_j}(b_{k_j} x d_{k_j}), так что A_n^k = (k_n/n) · M_n.
    """
    if req.subsequence is None:
        raise PreconditionError("Для M_n требуется подпоследовательность")
    if not req.subsequence.supports_horizon(n + 1):
        raise InvalidArgumentError(f"Для M_{n} нужен элемент k_{n} подпоследовательности")
    k_n = req.subsequence[n]
    return req.operator.algebra.from_vector(_final_sum(req, True, n) / k_n)


def rewrite_identity_check(req: AverageRequest, n: int, tol: float = REWRITE_TOL, strict: bool = True) -> float:
    """
    Вычисляет обе стороны тождества

        A_n^k({b_j}, x) = ((k_{n−1}+1)/n) · A_{k_{n−1}+1}({c_j b_j}, x),   c_j = χ_k(j),

    независимо (правую через веса с индикаторной маской) и возвращает
    ‖разность‖_∞.

    :param strict: Если False, превышение tol только записывается в лог и
        дефект возвращается вызывающему (так делает протокол average-trace).
    :raises PreconditionError: Если запрос двусторонний или без подпоследовательности.
    :raises CertificationError: Если strict и дефект больше tol.
    """
    if req.subsequence is None:
        raise PreconditionError("Тождество переписывания требует подпоследовательности")
    if not req.is_one_sided:
        raise PreconditionError("Тождество переписывания формулируется для односторонних средних")
    k = req.subsequence
    lhs = subsequential_average(req, n)
    horizon = k[n - 1] + 1
    masked = mask_by_indicator(req.left if req.left is not None else unit_weights(req.operator.algebra), k)
    plain = req.with_changes(left=masked, subsequence=None, n_max=horizon)
    rhs = average(plain, horizon) * (horizon / n)
    defect = operator_norm(lhs - rhs)
    if defect > tol:
        message = f"Дефект тождества переписывания {defect:.3e} > {tol:.0e} при n = {n}, k = {k.name}"
        if strict:
            raise CertificationError(message, defects={"rewrite_defect": defect})
        logger.warning(message)
    return defect


def weight_bound(req: AverageRequest) -> float:
    """C = sup‖b_j‖ · sup‖d_j‖ (отсутствующие веса дают множитель 1)."""
    bound = 1.0
    for weights in (req.left, req.right):
        if weights is not None:
            if weights.bound is None:
                raise HypothesisViolationError("bounded-weights", f"веса '{weights.description}' не ограничены")
            bound *= weights.bound
    return bound
