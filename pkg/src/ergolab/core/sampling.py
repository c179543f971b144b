"""
Воспроизводимая генерация случайных алгебр, элементов и унитарных элементов.

Все функции принимают `numpy.random.Generator`; генератор создается
через `make_rng` на алгоритме PCG64, имя которого записывается в манифест.
"""
from __future__ import annotations

from typing import Optional, Sequence, Tuple

import numpy as np
from scipy import linalg

from .algebra import AlgebraElement, CenterElement, Projection, TracialAlgebra, make_algebra

RNG_ALGORITHM = "numpy.random.PCG64"


def make_rng(seed: Optional[int]) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def spawn_rng(seed: int, index: int) -> np.random.Generator:
    """Независимый поток для экземпляра `index` серии с зерном `seed`."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), int(index)])))


def random_algebra(
    rng: np.random.Generator,
    max_total_dim: int = 6,
    max_blocks: int = 3,
    weight_range: Tuple[float, float] = (0.5, 2.0),
) -> TracialAlgebra:
    """
    Случайная алгебра с суммарной размерностью не больше `max_total_dim`.

    :param rng: Генератор случайных чисел.
    :param max_total_dim: Верхняя граница Σ d_i.
    :param max_blocks: Верхняя граница числа блоков.
    :param weight_range: Интервал, из которого берутся веса следа.
    """
    n_blocks = int(rng.integers(1, min(max_blocks, max_total_dim) + 1))
    total = int(rng.integers(n_blocks, max_total_dim + 1))
    if n_blocks == 1:
        dims = [total]
    else:
        cuts = np.sort(rng.choice(np.arange(1, total), size=n_blocks - 1, replace=False))
        dims = list(np.diff(np.concatenate(([0], cuts, [total]))).astype(int))
    weights = rng.uniform(weight_range[0], weight_range[1], size=n_blocks)
    return make_algebra([int(d) for d in dims], [float(w) for w in weights])


def _gaussian_block(rng: np.random.Generator, d: int) -> np.ndarray:
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_element(rng: np.random.Generator, algebra: TracialAlgebra, scale: float = 1.0) -> AlgebraElement:
    """Элемент с независимыми комплексными гауссовскими элементами матриц."""
    return AlgebraElement(algebra, [scale * _gaussian_block(rng, d) for d in algebra.block_dims])


def random_self_adjoint(rng: np.random.Generator, algebra: TracialAlgebra, scale: float = 1.0) -> AlgebraElement:
    return random_element(rng, algebra, scale).real_part()


def random_positive(rng: np.random.Generator, algebra: TracialAlgebra, scale: float = 1.0) -> AlgebraElement:
    """
    Положительный элемент a a* с операторной нормой `scale`
    (нулевой элемент не возвращается: a почти наверное обратим).
    """
    a = random_element(rng, algebra)
    x = a @ a.adjoint()
    x = x.real_part()
    return x * (scale / x.operator_norm())


def random_unitary(rng: np.random.Generator, algebra: TracialAlgebra) -> AlgebraElement:
    """
    Унитарный элемент, распределенный по мере Хаара в каждом блоке
    (QR-разложение гауссовской матрицы с поправкой фаз диагонали R).
    """
    blocks = []
    for d in algebra.block_dims:
        q, r = linalg.qr(_gaussian_block(rng, d))
        diag = np.diag(r)
        phases = np.where(np.abs(diag) > 0, diag / np.abs(diag), 1.0)
        blocks.append(q * phases)
    return AlgebraElement(algebra, blocks)


def random_central_phases(rng: np.random.Generator, algebra: TracialAlgebra) -> CenterElement:
    """Центральный унитарный элемент со случайными фазами по блокам."""
    angles = rng.uniform(0.0, 2 * np.pi, size=algebra.n_blocks)
    return CenterElement(algebra, np.exp(1j * angles))


def random_projection(
    rng: np.random.Generator, algebra: TracialAlgebra, ranks: Optional[Sequence[int]] = None
) -> Projection:
    """Проекция случайного ранга (или заданных рангов) в каждом блоке."""
    u = random_unitary(rng, algebra)
    bases = []
    for i, (block, d) in enumerate(zip(u.blocks, algebra.block_dims)):
        r = int(ranks[i]) if ranks is not None else int(rng.integers(0, d + 1))
        bases.append(block[:, :r])
    return Projection.from_ranges(algebra, bases)


def random_central_positive(
    rng: np.random.Generator, algebra: TracialAlgebra, upper: float
) -> CenterElement:
    """Центральный элемент z с 0 <= z <= upper · 1."""
    return CenterElement(algebra, rng.uniform(0.0, upper, size=algebra.n_blocks))
