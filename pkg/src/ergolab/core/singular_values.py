"""
Функция распределения λ_s(x) и обобщенные сингулярные числа μ_t(x).

В конечной размерности μ_t(x) есть убывающая перестановка сингулярных
чисел x, где каждое сингулярное число блока i занимает интервал длины w_i.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy import linalg

from .algebra import AlgebraElement
from .errors import InvalidArgumentError, PreconditionError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StepFunction:
    """
    Невозрастающая непрерывная справа ступенчатая функция на [0, τ(1)).

    Значение на [breakpoints[i], breakpoints[i+1]) равно values[i];
    за пределами последней точки функция равна 0.
    """
    breakpoints: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.breakpoints) != len(self.values) + 1:
            raise InvalidArgumentError(
                f"Число точек разбиения ({len(self.breakpoints)}) должно на 1 превышать "
                f"число значений ({len(self.values)})"
            )
        if any(b <= a for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise InvalidArgumentError("Точки разбиения должны строго возрастать")
        if any(v < 0 for v in self.values):
            raise InvalidArgumentError("Значения ступенчатой функции должны быть неотрицательны")

    def __call__(self, t: float) -> float:
        return float(self.evaluate(np.asarray([t]))[0])

    def evaluate(self, ts: npt.ArrayLike) -> npt.NDArray[np.float64]:
        """Векторизованное вычисление; в точке разбиения берется предел справа."""
        ts = np.asarray(ts, dtype=float)
        bps = np.asarray(self.breakpoints)
        vals = np.append(np.asarray(self.values, dtype=float), 0.0)
        idx = np.searchsorted(bps, ts, side="right") - 1
        out = vals[np.clip(idx, 0, len(vals) - 1)]
        return np.where(ts >= bps[-1], 0.0, out)

    def integral(self, s: float) -> float:
        """∫_0^s f(t) dt, точно по интервалам."""
        total = 0.0
        for a, b, v in zip(self.breakpoints, self.breakpoints[1:], self.values):
            if s <= a:
                break
            total += v * (min(b, s) - a)
        return float(total)

    def integral_of(self, f: Callable[[float], float]) -> float:
        """∫ f(value) dt по всем интервалам области определения."""
        return float(
            sum(f(v) * (b - a) for a, b, v in zip(self.breakpoints, self.breakpoints[1:], self.values))
        )

    def rows(self) -> List[Tuple[float, float, float]]:
        """Строки (t_start, t_end, value) для CSV."""
        return [(a, b, v) for a, b, v in zip(self.breakpoints, self.breakpoints[1:], self.values)]


def singular_values_with_masses(x: AlgebraElement) -> Tuple[npt.NDArray[np.float64], npt.NDArray[np.float64]]:
    """
    Сингулярные числа всех блоков по убыванию вместе с их следовыми массами.

    :return: Пара массивов (sigma, masses) одинаковой длины.
    """
    sigmas: List[float] = []
    masses: List[float] = []
    for block, w in zip(x.blocks, x.algebra.trace_weights):
        s = linalg.svdvals(block)
        sigmas.extend(float(v) for v in s)
        masses.extend([float(w)] * len(s))
    order = np.argsort(-np.asarray(sigmas), kind="stable")
    return np.asarray(sigmas)[order], np.asarray(masses)[order]


def distribution_function(x: AlgebraElement, s: float) -> float:
    """
    λ_s(x) = τ(χ_(s,∞)(|x|)).

    :raises InvalidArgumentError: Если s <= 0.
    """
    if s <= 0:
        raise InvalidArgumentError(f"Порог s должен быть > 0, получено {s}")
    sigmas, masses = singular_values_with_masses(x)
    return float(masses[sigmas > s].sum())


def singular_number_function(x: AlgebraElement) -> StepFunction:
    """
    μ_t(x) как ступенчатая функция на [0, τ(1)).

    Равные соседние значения объединяются в одну ступень.
    """
    sigmas, masses = singular_values_with_masses(x)
    breakpoints = [0.0]
    values: List[float] = []
    for sigma, mass in zip(sigmas, masses):
        if values and values[-1] == sigma:
            breakpoints[-1] += mass
        else:
            values.append(float(sigma))
            breakpoints.append(breakpoints[-1] + mass)
    return StepFunction(tuple(breakpoints), tuple(values))


def singular_number_by_definition(x: AlgebraElement, t: float) -> float:
    """
    μ_t(x) = inf{s > 0 : λ_s(x) <= t}, вычисленное по определению.

    Инфимум достигается в одном из сингулярных чисел или в нуле;
    используется как независимый оракул для `singular_number_function`.
    """
    sigmas, masses = singular_values_with_masses(x)
    # При малых s > 0 функция λ_s равна массе носителя |x|.
    if float(masses[sigmas > 0].sum()) <= t:
        return 0.0
    # λ непрерывна справа и постоянна между сингулярными числами,
    # поэтому множество {s : λ_s <= t} имеет вид [c, ∞).
    for c in sorted({float(v) for v in sigmas if v > 0}):
        if distribution_function(x, c) <= t:
            return c
    return float(sigmas[0])


def trace_of_function(f: Callable[[float], float], x: AlgebraElement) -> float:
    """
    τ(f(|x|)) = ∫_0^{τ(1)} f(μ_t(x)) dt.

    :param f: Непрерывная возрастающая функция с f(0) = 0.
    :raises PreconditionError: Если f(0) != 0.
    """
    f0 = float(f(0.0))
    if f0 != 0.0:
        raise PreconditionError(f"Требуется f(0) = 0, получено f(0) = {f0}")
    return singular_number_function(x).integral_of(f)


def majorization_integral(x: AlgebraElement, s: float) -> float:
    """∫_0^s μ_t(x) dt."""
    if s <= 0:
        raise InvalidArgumentError(f"Верхний предел s должен быть > 0, получено {s}")
    return singular_number_function(x).integral(s)


def is_majorized_pointwise(y: AlgebraElement, x: AlgebraElement, grid: Sequence[float], tol: float = 1e-12) -> bool:
    """True, если μ_t(y) <= μ_t(x) + tol во всех точках сетки."""
    mu_y = singular_number_function(y).evaluate(grid)
    mu_x = singular_number_function(x).evaluate(grid)
    return bool(np.all(mu_y <= mu_x + tol))
