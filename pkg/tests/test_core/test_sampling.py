"""
Тесты для воспроизводимой генерации случайных объектов.
"""
import numpy as np
import pytest

from ergolab.core.algebra import operator_norm
from ergolab.core.sampling import (
    make_rng,
    random_algebra,
    random_central_phases,
    random_central_positive,
    random_positive,
    random_unitary,
    spawn_rng,
)


class TestSampling:
    """Тесты для модуля sampling."""

    def test_same_seed_same_stream(self, small_algebra):
        """Тест: одно зерно дает одни и те же элементы."""
        a = random_unitary(make_rng(5), small_algebra)
        b = random_unitary(make_rng(5), small_algebra)
        assert a.distance(b) == 0.0

    def test_spawned_streams_differ(self):
        """Тест: потоки (seed, i) различаются по индексу и воспроизводимы."""
        first = spawn_rng(42, 0).standard_normal(4)
        second = spawn_rng(42, 1).standard_normal(4)
        again = spawn_rng(42, 0).standard_normal(4)
        assert not np.allclose(first, second)
        assert np.array_equal(first, again)

    @pytest.mark.parametrize("seed", range(10))
    def test_random_algebra_respects_limits(self, seed):
        """Тест: Σ d_i и число блоков не превышают заданных границ."""
        algebra = random_algebra(make_rng(seed), max_total_dim=6, max_blocks=3)
        assert 1 <= algebra.n_blocks <= 3
        assert algebra.total_dim <= 6
        assert all(0.5 <= w <= 2.0 for w in algebra.trace_weights)

    def test_random_unitary_is_unitary(self, small_algebra, rng):
        """Тест: u* u = 1."""
        u = random_unitary(rng, small_algebra)
        assert operator_norm(u.adjoint() @ u - small_algebra.identity()) < 1e-12

    def test_random_positive_has_requested_norm(self, small_algebra, rng):
        """Тест: положительный элемент с нормой scale."""
        x = random_positive(rng, small_algebra, scale=3.0)
        assert x.min_eigenvalue() >= -1e-12
        assert x.operator_norm() == pytest.approx(3.0)

    def test_central_samples(self, small_algebra, rng):
        """Тест: центральные фазы унимодулярны, центральный положительный элемент ограничен."""
        phases = random_central_phases(rng, small_algebra)
        assert np.allclose(np.abs(phases.scalars), 1.0)
        z = random_central_positive(rng, small_algebra, upper=2.0)
        assert np.all((z.scalars.real >= 0) & (z.scalars.real <= 2.0))
