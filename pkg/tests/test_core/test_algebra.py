"""
Тесты для алгебры со следом, элементов, проекций и спектрального исчисления.
"""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ergolab.core.algebra import (
    AlgebraElement,
    CenterElement,
    Projection,
    functional_calculus,
    make_algebra,
    order_leq,
    projection_meet,
    projection_meet_all,
    spectral_decomposition,
    spectral_projection,
    trace,
)
from ergolab.core.errors import DomainError, InvalidArgumentError, PreconditionError
from ergolab.core.sampling import make_rng, random_element, random_positive, random_projection, random_self_adjoint


class TestTracialAlgebra:
    """Тесты для TracialAlgebra и make_algebra."""

    def test_tau_one_is_weighted_dimension(self, small_algebra):
        """Тест: τ(1) = Σ w_i · d_i."""
        assert small_algebra.tau_one == pytest.approx(2.5)
        assert small_algebra.total_dim == 3
        assert small_algebra.coordinate_dim == 5

    @pytest.mark.parametrize(
        "dims, weights",
        [
            ([], []),
            ([0, 1], [1.0, 1.0]),
            ([2, 1], [1.0, -0.5]),
            ([2, 1], [1.0]),
        ],
    )
    def test_invalid_description_raises(self, dims, weights):
        """Тест: неположительные размерности и веса или разные длины списков отклоняются."""
        with pytest.raises(InvalidArgumentError):
            make_algebra(dims, weights)

    def test_algebra_is_immutable(self, small_algebra):
        """Тест: алгебра неизменяема."""
        with pytest.raises(Exception):
            small_algebra.block_dims = (3,)

    def test_from_vector_inverts_to_vector(self, small_algebra, rng):
        """Тест: from_vector восстанавливает элемент по координатам."""
        x = random_element(rng, small_algebra)
        assert small_algebra.from_vector(x.to_vector()).distance(x) == 0.0

    def test_from_vector_wrong_length_raises(self, small_algebra):
        """Тест: вектор неверной длины отклоняется."""
        with pytest.raises(InvalidArgumentError):
            small_algebra.from_vector(np.zeros(4))


class TestAlgebraElement:
    """Тесты для AlgebraElement."""

    def test_trace_of_identity(self, small_algebra):
        """Тест: τ(1) совпадает со свойством алгебры."""
        assert trace(small_algebra.identity()).real == pytest.approx(small_algebra.tau_one)

    def test_trace_uses_block_weights(self, small_algebra):
        """Тест: след блока умножается на вес блока."""
        x = small_algebra.diag([3.0, 0.2], [1.5])
        assert x.trace() == pytest.approx(3.0 + 0.2 + 0.5 * 1.5)

    def test_wrong_block_shape_raises(self, small_algebra):
        """Тест: блок неверной формы отклоняется."""
        with pytest.raises(InvalidArgumentError):
            AlgebraElement(small_algebra, [np.eye(2), np.eye(2)])

    def test_non_finite_entries_raise(self, small_algebra):
        """Тест: элементы с NaN отклоняются."""
        with pytest.raises(InvalidArgumentError):
            AlgebraElement(small_algebra, [np.eye(2), [[np.nan]]])

    def test_elements_of_different_algebras_do_not_mix(self, small_algebra):
        """Тест: сложение элементов разных алгебр запрещено."""
        other = make_algebra([2, 1], [1.0, 1.0])
        with pytest.raises(InvalidArgumentError):
            small_algebra.identity() + other.identity()

    def test_blocks_are_read_only(self, small_algebra):
        """Тест: массивы блоков защищены от записи."""
        x = small_algebra.identity()
        with pytest.raises(ValueError):
            x.blocks[0][0, 0] = 5.0

    def test_trace_is_tracial(self, small_algebra, rng):
        """Тест: τ(xy) = τ(yx)."""
        x, y = random_element(rng, small_algebra), random_element(rng, small_algebra)
        assert abs(trace(x @ y) - trace(y @ x)) < 1e-10

    def test_adjoint_reverses_products(self, small_algebra, rng):
        """Тест: (xy)* = y* x*."""
        x, y = random_element(rng, small_algebra), random_element(rng, small_algebra)
        assert (x @ y).adjoint().distance(y.adjoint() @ x.adjoint()) < 1e-12

    def test_real_and_imaginary_parts_recombine(self, small_algebra, rng):
        """Тест: x = Re x + i · Im x, обе части самосопряжены."""
        x = random_element(rng, small_algebra)
        re, im = x.real_part(), x.imag_part()
        assert re.is_self_adjoint() and im.is_self_adjoint()
        assert (re + 1j * im).distance(x) < 1e-12

    def test_positive_and_negative_parts(self, small_algebra, rng):
        """Тест: x = x₊ − x₋ и обе части положительны."""
        x = random_self_adjoint(rng, small_algebra)
        plus, minus = x.positive_part(), x.negative_part()
        assert plus.min_eigenvalue() >= -1e-12
        assert minus.min_eigenvalue() >= -1e-12
        assert (plus - minus).distance(x) < 1e-12

    def test_abs_squares_to_x_star_x(self, small_algebra, rng):
        """Тест: |x|² = x* x."""
        x = random_element(rng, small_algebra)
        a = x.abs()
        assert (a @ a).distance(x.adjoint() @ x) < 1e-10

    def test_power(self, small_algebra, rng):
        """Тест: x³ = x · x · x, отрицательная степень запрещена."""
        x = random_element(rng, small_algebra)
        assert x.power(3).distance(x @ x @ x) < 1e-10
        with pytest.raises(InvalidArgumentError):
            x.power(-1)

    def test_serialization_preserves_element(self, small_algebra, rng):
        """Тест: to_dict/from_dict сохраняет элемент и алгебру."""
        x = random_element(rng, small_algebra)
        restored = AlgebraElement.from_dict(x.to_dict())
        assert restored.algebra == small_algebra
        assert restored.distance(x) == 0.0

    def test_from_dict_rejects_garbage(self):
        """Тест: некорректная сериализация дает InvalidArgumentError."""
        with pytest.raises(InvalidArgumentError):
            AlgebraElement.from_dict({"dims": [1], "weights": [1.0]})


class TestProjection:
    """Тесты для Projection и пересечения проекций."""

    def test_masses_of_identity_and_zero(self, small_algebra):
        """Тест: τ(1) и τ(0) для тривиальных проекций."""
        assert Projection.identity(small_algebra).mass == pytest.approx(2.5)
        assert Projection.zero(small_algebra).complement_mass == pytest.approx(2.5)

    def test_non_idempotent_rejected(self, small_algebra):
        """Тест: неидемпотентный элемент не является проекцией."""
        with pytest.raises(InvalidArgumentError):
            Projection(small_algebra, [2 * np.eye(2), [[1.0]]])

    def test_complement(self, small_algebra, rng):
        """Тест: e + e⊥ = 1 и τ(e⊥) = τ(1) − τ(e)."""
        e = random_projection(rng, small_algebra)
        f = e.complement()
        assert (e + f).distance(small_algebra.identity()) < 1e-10
        assert f.mass == pytest.approx(e.complement_mass)

    def test_meet_of_coordinate_projections(self, small_algebra):
        """Тест: пересечение диагональных проекций есть их произведение."""
        e = Projection(small_algebra, [np.diag([1.0, 1.0]), [[0.0]]])
        f = Projection(small_algebra, [np.diag([1.0, 0.0]), [[1.0]]])
        meet = projection_meet(e, f)
        assert meet.distance(e @ f) < 1e-10
        assert meet.mass == pytest.approx(1.0)

    def test_meet_is_below_both(self, small_algebra, rng):
        """Тест: e ∧ f <= e и e ∧ f <= f."""
        e = random_projection(rng, small_algebra, ranks=[2, 1])
        f = random_projection(rng, small_algebra, ranks=[1, 1])
        meet = e.meet(f)
        assert order_leq(meet, e, tol=1e-9)
        assert order_leq(meet, f, tol=1e-9)

    def test_meet_all_requires_projections(self):
        """Тест: пересечение пустого набора не определено."""
        with pytest.raises(InvalidArgumentError):
            projection_meet_all([])

    def test_compress(self, small_algebra):
        """Тест: e x e обнуляет удаленные направления."""
        e = Projection(small_algebra, [np.diag([1.0, 0.0]), [[1.0]]])
        x = small_algebra.diag([3.0, 0.2], [1.5])
        assert e.compress(x).distance(small_algebra.diag([3.0, 0.0], [1.5])) < 1e-12


class TestCenterElement:
    """Тесты для CenterElement."""

    def test_central_element_commutes(self, small_algebra, rng):
        """Тест: элемент центра коммутирует с произвольным элементом."""
        z = small_algebra.central([2.0, 1j])
        x = random_element(rng, small_algebra)
        assert (z @ x).distance(x @ z) < 1e-12
        assert z.is_central()

    def test_wrong_number_of_scalars(self, small_algebra):
        """Тест: число скаляров должно совпадать с числом блоков."""
        with pytest.raises(InvalidArgumentError):
            CenterElement(small_algebra, [1.0])

    def test_from_element_rejects_non_central(self, small_algebra):
        """Тест: нецентральный элемент не приводится к CenterElement."""
        with pytest.raises(InvalidArgumentError):
            CenterElement.from_element(small_algebra.unit(0, 0, 1))


class TestSpectralCalculus:
    """Тесты для спектрального разложения и функционального исчисления."""

    @given(seed=st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=25, deadline=None)
    def test_decomposition_reconstructs_element(self, seed):
        """Тест: Σ λ_i e_i восстанавливает самосопряженный x."""
        rng = make_rng(seed)
        algebra = make_algebra([2, 1, 3], [1.0, 0.5, 2.0])
        x = random_self_adjoint(rng, algebra)
        dec = spectral_decomposition(x)
        assert dec.reconstruct().distance(x) < 1e-9
        assert list(dec.eigenvalues) == sorted(dec.eigenvalues, reverse=True)
        assert sum(dec.trace_masses) == pytest.approx(algebra.tau_one)

    def test_repeated_eigenvalues_are_clustered(self, small_algebra):
        """Тест: равные собственные значения разных блоков объединяются."""
        dec = spectral_decomposition(small_algebra.diag([1.0, 1.0], [1.0]))
        assert dec.eigenvalues == pytest.approx((1.0,))
        assert dec.trace_masses == pytest.approx((2.5,))

    def test_decomposition_requires_self_adjoint(self, small_algebra):
        """Тест: несамосопряженный вход дает PreconditionError."""
        with pytest.raises(PreconditionError):
            spectral_decomposition(small_algebra.unit(0, 0, 1))

    def test_functional_calculus_square(self, small_algebra, rng):
        """Тест: f(x) = x² совпадает с произведением."""
        x = random_self_adjoint(rng, small_algebra)
        assert functional_calculus(lambda s: s * s, x).distance(x @ x) < 1e-10

    def test_functional_calculus_domain_error(self, small_algebra):
        """Тест: √ отрицательного собственного значения дает DomainError."""
        with pytest.raises(DomainError):
            functional_calculus(math.sqrt, small_algebra.diag([1.0, -1.0], [2.0]))

    def test_functional_calculus_requires_self_adjoint(self, small_algebra):
        """Тест: несамосопряженный вход дает PreconditionError."""
        with pytest.raises(PreconditionError):
            functional_calculus(abs, small_algebra.unit(0, 1, 0))

    def test_spectral_projection(self, small_algebra):
        """Тест: χ_(1,∞)(x) для диагонального x."""
        x = small_algebra.diag([3.0, 0.2], [1.5])
        e = spectral_projection(x, lambda v: v > 1.0)
        assert e.mass == pytest.approx(1.5)
        assert e.distance(small_algebra.diag([1.0, 0.0], [1.0])) < 1e-12

    def test_order(self, small_algebra, rng):
        """Тест: 0 <= x <= ‖x‖ · 1 для положительного x."""
        x = random_positive(rng, small_algebra, scale=2.0)
        assert order_leq(small_algebra.zero(), x)
        assert order_leq(x, small_algebra.identity() * 2.0)
        assert not order_leq(x, small_algebra.identity())
