"""
Строго возрастающие последовательности индексов k = {k_j}, их плотность
и нижняя плотность. Натуральные числа включают 0.
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Any, Callable, List, Mapping, NamedTuple, Optional, Sequence

from .errors import InvalidArgumentError

logger = logging.getLogger(__name__)

DEFAULT_CHECK_SIZE = 1024


class Subsequence:
    """
    Подпоследовательность натуральных чисел: генератор j ↦ k_j,
    согласованный с ним тест принадлежности и заявленная плотность.

    :param name: Короткое имя для отчетов.
    :param generator: Строго возрастающее отображение j ↦ k_j.
    :param membership: m ↦ (m ∈ k).
    :param declared_density: Аналитическая плотность, если известна.
    :param length: Длина для конечных последовательностей.
    """

    def __init__(
        self,
        name: str,
        generator: Callable[[int], int],
        membership: Callable[[int], bool],
        declared_density: Optional[float] = None,
        length: Optional[int] = None,
    ):
        self.name = name
        self._generator = generator
        self._membership = membership
        self.declared_density = declared_density
        self.length = length

    def __getitem__(self, j: int) -> int:
        if j < 0 or (self.length is not None and j >= self.length):
            raise IndexError(f"Индекс {j} вне подпоследовательности '{self.name}'")
        return int(self._generator(j))

    def contains(self, m: int) -> bool:
        return m >= 0 and bool(self._membership(m))

    def take(self, n: int) -> List[int]:
        return [self[j] for j in range(n)]

    def supports_horizon(self, n: int) -> bool:
        return self.length is None or n <= self.length

    def check_consistency(self, n_check: int = DEFAULT_CHECK_SIZE) -> None:
        """
        Проверяет строгое возрастание и согласованность теста принадлежности
        с генератором на отрезке [0, k_{n_check − 1}].

        :raises InvalidArgumentError: Если найдено нарушение.
        """
        n = n_check if self.length is None else min(n_check, self.length)
        values = self.take(n)
        for j in range(1, n):
            if values[j] <= values[j - 1]:
                raise InvalidArgumentError(
                    f"Подпоследовательность '{self.name}' не возрастает строго: k_{j - 1} = {values[j - 1]}, k_{j} = {values[j]}"
                )
        if values and values[0] < 0:
            raise InvalidArgumentError(f"Подпоследовательность '{self.name}' содержит отрицательные индексы")
        generated = set(values)
        upper = values[-1] if values else -1
        for m in range(upper + 1):
            if self.contains(m) != (m in generated):
                raise InvalidArgumentError(
                    f"Тест принадлежности '{self.name}' не согласован с генератором в точке {m}"
                )

    def __repr__(self) -> str:
        return f"Subsequence({self.name!r}, density={self.declared_density})"


class LowerDensityWitness(NamedTuple):
    sup_ratio: float
    """max k_n / n по n из [burn_in, n_max]."""
    final_ratio: float
    """k_{n_max} / n_max, оценка 1/d."""


def _nth_nonsquare(n: int) -> int:
    # n-е (n >= 1) натуральное число, не являющееся квадратом: n + round(√n).
    r = math.isqrt(n)
    return n + r + (1 if n > r * r + r else 0)


def _is_square(m: int) -> bool:
    r = math.isqrt(m)
    return r * r == m


def all_naturals() -> Subsequence:
    return Subsequence("all", lambda j: j, lambda m: True, declared_density=1.0)


def arithmetic(a: int, b: int = 0) -> Subsequence:
    """k_j = a·j + b, плотность 1/a."""
    if a < 1 or b < 0:
        raise InvalidArgumentError(f"Арифметическая прогрессия требует a >= 1 и b >= 0, получено a={a}, b={b}")
    return Subsequence(
        f"arithmetic({a},{b})",
        lambda j: a * j + b,
        lambda m: m >= b and (m - b) % a == 0,
        declared_density=1.0 / a,
    )


def squares_complement() -> Subsequence:
    """Натуральные числа, не являющиеся полными квадратами: 2, 3, 5, 6, 7, 8, 10, ..."""
    return Subsequence(
        "nosquares",
        lambda j: _nth_nonsquare(j + 1),
        lambda m: not _is_square(m),
        declared_density=1.0,
    )


def explicit_list(values: Sequence[int]) -> Subsequence:
    """
    Конечная подпоследовательность из явного списка.

    :raises InvalidArgumentError: Если список пуст, содержит отрицательные
        числа или не возрастает строго.
    """
    items = [int(v) for v in values]
    if not items:
        raise InvalidArgumentError("Явный список индексов не может быть пустым")
    if items[0] < 0:
        raise InvalidArgumentError("Индексы подпоследовательности должны быть >= 0")
    for prev, cur in zip(items, items[1:]):
        if cur <= prev:
            raise InvalidArgumentError(f"Явный список должен строго возрастать: {prev} затем {cur}")
    members = frozenset(items)
    return Subsequence("list", items.__getitem__, members.__contains__, declared_density=None, length=len(items))


def rate(density: float) -> Subsequence:
    """
    k_j = ⌊j / d⌋ для 0 < d <= 1 (d приближается дробью), плотность d.
    """
    if not 0 < density <= 1:
        raise InvalidArgumentError(f"Плотность должна лежать в (0, 1], получено {density}")
    frac = Fraction(density).limit_denominator(10**6)
    num, den = frac.numerator, frac.denominator

    def member(m: int) -> bool:
        j = -((-m * num) // den)
        return (j * den) // num == m

    return Subsequence(f"rate({frac})", lambda j: (j * den) // num, member, declared_density=float(frac))


def make_subsequence(spec: Mapping[str, Any]) -> Subsequence:
    """
    Строит подпоследовательность по описанию.

    :param spec: {"type": "all"|"arithmetic"|"nosquares"|"list"|"rate", ...};
        для arithmetic ключи "a", "b", для list ключ "values", для rate ключ "density".
    :raises InvalidArgumentError: Неизвестный тип или нарушение строгого возрастания.
    """
    kind = spec.get("type", "all")
    if kind == "all":
        k = all_naturals()
    elif kind == "arithmetic":
        k = arithmetic(int(spec.get("a", 1)), int(spec.get("b", 0)))
    elif kind == "nosquares":
        k = squares_complement()
    elif kind == "list":
        k = explicit_list(spec.get("values") or [])
    elif kind == "rate":
        k = rate(float(spec.get("density", 1.0)))
    else:
        raise InvalidArgumentError(f"Неизвестный тип подпоследовательности: '{kind}'")
    k.check_consistency()
    logger.debug(f"Создана подпоследовательность {k!r}")
    return k


def empirical_density(k: Subsequence, n: int) -> float:
    """|{0, 1, ..., n} ∩ k| / (n + 1), точный подсчет через тест принадлежности."""
    if n < 0:
        raise InvalidArgumentError(f"n должно быть >= 0, получено {n}")
    count = sum(1 for m in range(n + 1) if k.contains(m))
    return count / (n + 1)


def lower_density_witness(k: Subsequence, n_max: int, burn_in: int = 1) -> LowerDensityWitness:
    """
    max_{burn_in <= n <= n_max} k_n / n и k_{n_max} / n_max.

    Конечное значение максимума подтверждает положительную нижнюю плотность
    в пределах горизонта.
    """
    if n_max < 1:
        raise InvalidArgumentError(f"n_max должно быть >= 1, получено {n_max}")
    if not 1 <= burn_in <= n_max:
        raise InvalidArgumentError(f"burn_in должно лежать в [1, {n_max}], получено {burn_in}")
    sup_ratio = max(k[n] / n for n in range(burn_in, n_max + 1))
    return LowerDensityWitness(sup_ratio=float(sup_ratio), final_ratio=k[n_max] / n_max)
