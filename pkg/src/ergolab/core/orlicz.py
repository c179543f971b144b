"""
Функции Орлича, условие Δ₂, модуляры τ(Φ(|x|/λ)) и нормы Люксембурга.

L^p-нормы получаются как частный случай Φ(u) = u^p / p, для которого
‖x‖_Φ = ‖x‖_p · p^{-1/p}.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional

import numpy as np
import numpy.typing as npt
from scipy import optimize

from .algebra import AlgebraElement, operator_norm
from .errors import DomainError, InvalidArgumentError
from .singular_values import singular_values_with_masses

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

DEFAULT_GRID = np.logspace(-6, 3, 512)
EXPM1_GRID = np.logspace(-6, math.log10(50.0), 512)
CONVEXITY_TOL = 1e-12
DEFAULT_LUXEMBURG_TOL = 1e-12
_BRACKET_STEPS = 1100


def default_grid() -> FloatArray:
    return DEFAULT_GRID.copy()


@dataclass(frozen=True, eq=False)
class OrliczFunction:
    """
    Выпуклая возрастающая функция Φ с Φ(0) = 0 и Φ(t) > 0 при t > 0.

    `evaluate` обязана быть векторизованной по numpy-массивам. Выпуклость
    и условие Δ₂ (если задана константа d) проверяются на сетке при создании.
    """
    name: str
    evaluate: Callable[[FloatArray], FloatArray]
    delta2_constant: Optional[float] = None
    convexity_grid: FloatArray = field(default_factory=default_grid)

    def __post_init__(self) -> None:
        self.validate()

    def __call__(self, t: float) -> float:
        return float(self.evaluate(np.asarray([t], dtype=float))[0])

    def values(self, ts: npt.ArrayLike) -> FloatArray:
        with np.errstate(over="ignore"):
            return np.asarray(self.evaluate(np.asarray(ts, dtype=float)), dtype=float)

    def validate(self) -> None:
        """
        Проверяет определение функции Орлича на сетке.

        :raises InvalidArgumentError: Если нарушено Φ(0) = 0, положительность,
            выпуклость в средних точках или заявленное условие Δ₂.
        """
        grid = np.asarray(self.convexity_grid, dtype=float)
        phi0 = self(0.0)
        if phi0 != 0.0:
            raise InvalidArgumentError(f"Функция '{self.name}': требуется Φ(0) = 0, получено {phi0}")
        vals = self.values(grid)
        if np.any(vals <= 0):
            raise InvalidArgumentError(f"Функция '{self.name}' должна быть > 0 при t > 0")

        points = np.concatenate(([0.0], grid))
        left, right = points[:-1], points[1:]
        lhs = self.values((left + right) / 2)
        rhs = (self.values(left) + self.values(right)) / 2
        if np.any(lhs > rhs + CONVEXITY_TOL * np.maximum(1.0, np.abs(rhs))):
            raise InvalidArgumentError(f"Функция '{self.name}' не выпукла на сетке проверки")

        if self.delta2_constant is not None and not self.satisfies_delta2(self.delta2_constant):
            raise InvalidArgumentError(
                f"Функция '{self.name}' не удовлетворяет Δ₂ с константой d = {self.delta2_constant}"
            )

    def satisfies_delta2(self, d: float) -> bool:
        """Φ(2t) <= d · Φ(t) на сетке с относительным допуском 1e-12."""
        grid = np.asarray(self.convexity_grid, dtype=float)
        doubled = self.values(2 * grid)
        bound = d * self.values(grid)
        return bool(np.all(doubled <= bound * (1 + CONVEXITY_TOL)))

    def inverse_on_grid(self, y: float) -> float:
        """Наименьшая точка сетки t с Φ(t) >= y (последняя точка, если таких нет)."""
        grid = np.asarray(self.convexity_grid, dtype=float)
        idx = int(np.searchsorted(self.values(grid), y, side="left"))
        return float(grid[min(idx, len(grid) - 1)])


def power_function(p: float) -> OrliczFunction:
    """
    Φ(u) = u^p / p, p >= 1, с константой Δ₂ d = 2^p.

    :raises InvalidArgumentError: Если p < 1 (функция не выпукла).
    """
    if not p >= 1:
        raise InvalidArgumentError(f"Показатель p должен быть >= 1, получено {p}")
    return OrliczFunction(
        name=f"p:{p:g}",
        evaluate=lambda u: np.power(u, p) / p,
        delta2_constant=float(2.0**p),
    )


def expm1_function() -> OrliczFunction:
    """Φ(u) = e^u − 1. Условие Δ₂ не выполняется; сетка ограничена [1e-6, 50]."""
    return OrliczFunction(name="expm1", evaluate=np.expm1, delta2_constant=None, convexity_grid=EXPM1_GRID.copy())


def orlicz_from_name(name: str) -> OrliczFunction:
    """
    Разбирает имя встроенной функции: "p:<число>" или "expm1".

    :raises InvalidArgumentError: Если имя не распознано.
    """
    name = name.strip()
    if name == "expm1":
        return expm1_function()
    if name.startswith("p:"):
        try:
            p = float(name[2:])
        except ValueError as e:
            raise InvalidArgumentError(f"Некорректный показатель в имени функции Орлича: '{name}'") from e
        return power_function(p)
    raise InvalidArgumentError(f"Неизвестная функция Орлича: '{name}' (ожидается 'p:<p>' или 'expm1')")


def find_linearization_constant(phi: OrliczFunction, delta: float) -> float:
    """
    Находит u с u · Φ(t) >= t при всех t >= δ.

    Φ(t)/t не убывает для выпуклой Φ с Φ(0) = 0, поэтому годится u = δ / Φ(δ).
    Гарантия дополнительно проверяется на сетке t ∈ δ · [1, 1 + 1e3].

    :raises InvalidArgumentError: Если δ <= 0.
    :raises DomainError: Если проверка на сетке не прошла.
    """
    if not delta > 0:
        raise InvalidArgumentError(f"δ должно быть > 0, получено {delta}")
    u = delta / phi(delta)
    ts = delta * (1.0 + np.concatenate(([0.0], DEFAULT_GRID)))
    lhs = u * phi.values(ts)
    if np.any(lhs < ts * (1 - CONVEXITY_TOL)):
        raise DomainError(f"Константа линеаризации u = {u} не прошла проверку для '{phi.name}'")
    return float(u)


def _modular_from_spectrum(sigmas: FloatArray, masses: FloatArray, phi: OrliczFunction, lam: float) -> float:
    with np.errstate(over="ignore", invalid="ignore"):
        return float(np.sum(masses * phi.values(sigmas / lam)))


def modular(x: AlgebraElement, phi: OrliczFunction, lam: float) -> float:
    """
    τ(Φ(|x|/λ)) = Σ_i m_i · Φ(σ_i / λ) по сингулярным числам σ_i с массами m_i.

    :raises InvalidArgumentError: Если λ <= 0.
    """
    if not lam > 0:
        raise InvalidArgumentError(f"λ должно быть > 0, получено {lam}")
    sigmas, masses = singular_values_with_masses(x)
    return _modular_from_spectrum(sigmas, masses, phi, lam)


def luxemburg_norm(x: AlgebraElement, phi: OrliczFunction, tol: float = DEFAULT_LUXEMBURG_TOL) -> float:
    """
    ‖x‖_Φ = inf{λ > 0 : τ(Φ(|x|/λ)) <= 1}, найденная бисекцией.

    Верхняя граница скобки ‖x‖_∞ · max(1, τ(1)), нижняя получается из обратной
    функции на сетке; обе проверяются вычислением модуляра и при необходимости
    расширяются геометрически.

    :param tol: Относительная точность бисекции.
    :raises InvalidArgumentError: Если tol <= 0.
    """
    if not tol > 0:
        raise InvalidArgumentError(f"Точность должна быть > 0, получено {tol}")
    sigmas, masses = singular_values_with_masses(x)
    top = float(sigmas[0])
    if top == 0.0:
        return 0.0

    def excess(lam: float) -> float:
        return _modular_from_spectrum(sigmas, masses, phi, lam) - 1.0

    hi = top * max(1.0, x.algebra.tau_one)
    for _ in range(_BRACKET_STEPS):
        if excess(hi) <= 0:
            break
        hi *= 2.0
    else:
        raise DomainError(f"Не удалось найти верхнюю границу скобки для '{phi.name}'")

    lo = min(hi, 0.5 * top / phi.inverse_on_grid(1.0 / float(masses[0])))
    for _ in range(_BRACKET_STEPS):
        if excess(lo) > 0:
            break
        lo /= 2.0
    else:
        raise DomainError(f"Не удалось найти нижнюю границу скобки для '{phi.name}'")

    logger.debug(f"Норма Люксембурга '{phi.name}': скобка [{lo:.6g}, {hi:.6g}]")
    if excess(hi) == 0.0:
        return float(hi)
    root = optimize.bisect(
        excess, lo, hi, xtol=1e-300, rtol=max(tol, 4 * np.finfo(float).eps), maxiter=2000
    )
    return float(root)


def lp_norm(x: AlgebraElement, p: float) -> float:
    """
    ‖x‖_p = τ(|x|^p)^{1/p}; p = ∞ дает операторную норму.

    :raises InvalidArgumentError: Если p < 1.
    """
    if not p >= 1:
        raise InvalidArgumentError(f"Показатель p должен быть >= 1, получено {p}")
    if math.isinf(p):
        return operator_norm(x)
    sigmas, masses = singular_values_with_masses(x)
    return float(np.sum(masses * sigmas**p) ** (1.0 / p))


def norm_table(x: AlgebraElement, phi: OrliczFunction, tol: float = DEFAULT_LUXEMBURG_TOL) -> Dict[str, object]:
    """
    Сводка норм элемента: ‖x‖_1, ‖x‖_2, ‖x‖_3, ‖x‖_∞, ‖x‖_Φ, τ(Φ(|x|)) и вердикт Δ₂.
    """
    return {
        "p1": lp_norm(x, 1.0),
        "p2": lp_norm(x, 2.0),
        "p3": lp_norm(x, 3.0),
        "pinf": lp_norm(x, math.inf),
        "phi": phi.name,
        "luxemburg": luxemburg_norm(x, phi, tol),
        "modular_at_1": modular(x, phi, 1.0),
        "delta2": phi.delta2_constant is not None,
        "tau_one": x.algebra.tau_one,
    }
