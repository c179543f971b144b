"""
Тесты для жадного поиска проекций со сжатиями малой нормы.
"""
import pytest

from ergolab.core.algebra import Projection
from ergolab.core.errors import InvalidArgumentError
from ergolab.core.projections import compressed_norms, compressed_sup, peel
from ergolab.core.sampling import random_element


@pytest.fixture
def diagonal(small_algebra):
    return small_algebra.diag([3.0, 0.2], [1.5])


class TestCompressedNorms:
    """Тесты для compressed_norms и compressed_sup."""

    def test_identity_projection_keeps_norms(self, small_algebra, rng):
        """Тест: при e = 1 сжатия равны нормам элементов."""
        xs = [random_element(rng, small_algebra) for _ in range(4)]
        norms = compressed_norms(xs, Projection.identity(small_algebra))
        assert norms == pytest.approx([x.operator_norm() for x in xs])

    def test_zero_projection(self, small_algebra, diagonal):
        """Тест: при e = 0 все сжатия нулевые."""
        assert compressed_sup([diagonal], Projection.zero(small_algebra)) == 0.0

    def test_one_sided_compression(self, small_algebra):
        """Тест: ‖x e‖ может превышать ‖e x e‖."""
        x = small_algebra.unit(0, 0, 1)
        e = small_algebra.diag([0.0, 1.0], [1.0])
        e = Projection(small_algebra, e.blocks)
        assert compressed_sup([x], e) == pytest.approx(0.0)
        assert compressed_sup([x], e, one_sided=True) == pytest.approx(1.0)


class TestPeel:
    """Тесты для peel."""

    def test_peels_large_directions(self, diagonal):
        """Тест: удаляются направления собственных значений 3 и 1.5."""
        result = peel([diagonal], level=1.0, budget=2.0)
        assert result.success
        assert result.removed == 2
        assert result.trace_defect == pytest.approx(1.5)
        assert result.achieved_sup == pytest.approx(0.2)

    def test_budget_exhausted(self, diagonal):
        """Тест: при бюджете 1 удаляется только первое направление."""
        result = peel([diagonal], level=1.0, budget=1.0)
        assert not result.success
        assert result.removed == 1
        assert result.trace_defect == pytest.approx(1.0)

    def test_strict_budget(self, diagonal):
        """Тест: строгий бюджет запрещает τ(e⊥) = бюджет."""
        result = peel([diagonal], level=1.0, budget=1.0, strict=True)
        assert not result.success
        assert result.removed == 0

    def test_nothing_to_remove(self, diagonal):
        """Тест: если уровень уже достигнут, e = 1."""
        result = peel([diagonal], level=5.0, budget=0.1, strict=True)
        assert result.success
        assert result.removed == 0
        assert result.trace_defect == pytest.approx(0.0)

    def test_family_of_elements(self, small_algebra, rng):
        """Тест: после пилинга sup сжатий семейства не больше уровня."""
        xs = [random_element(rng, small_algebra) for _ in range(5)]
        result = peel(xs, level=0.5, budget=small_algebra.tau_one)
        assert result.success
        assert compressed_sup(xs, result.projection) <= 0.5 + 1e-12

    def test_start_projection(self, small_algebra, diagonal):
        """Тест: поиск начинается с заданной проекции."""
        start = Projection(small_algebra, small_algebra.diag([0.0, 1.0], [1.0]).blocks)
        result = peel([diagonal], level=1.0, budget=2.0, start=start)
        assert result.removed == 1
        assert result.trace_defect == pytest.approx(1.5)

    def test_empty_family_rejected(self):
        """Тест: пустое семейство отклоняется."""
        with pytest.raises(InvalidArgumentError):
            peel([], level=1.0, budget=1.0)
