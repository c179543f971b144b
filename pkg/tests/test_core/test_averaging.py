"""
Тесты для эргодических средних A_n, A_n^k и M_n.
"""
import numpy as np
import pytest

from ergolab.core.averaging import (
    average,
    average_sequence,
    m_average,
    make_request,
    rewrite_identity_check,
    subsequential_average,
    weight_bound,
)
from ergolab.core import averaging as averaging_module
from ergolab.core.errors import CertificationError, HypothesisViolationError, InvalidArgumentError, PreconditionError
from ergolab.core.operators import apply_power, from_matrix
from ergolab.core.sampling import random_element
from ergolab.core.subsequences import arithmetic, explicit_list, squares_complement
from ergolab.core.weights import WeightKind, WeightSequence, make_weight_sequence


@pytest.fixture
def central_weights(small_algebra):
    return make_weight_sequence(
        small_algebra,
        {"kind": "central", "phases": [[0.3, 0.05]], "perturbation": {"type": "harmonic", "eps0": 0.2}},
        seed=1,
    )


class TestAverages:
    """Тесты для average и subsequential_average."""

    def test_identity_operator_keeps_element(self, identity_op, small_algebra, rng):
        """Тест: при T = id и b_j = 1 все средние равны x."""
        x = random_element(rng, small_algebra)
        for a in average_sequence(make_request(identity_op, x, n_max=10)):
            assert a.distance(x) < 1e-12

    def test_cyclic_average_over_period(self, cyclic_op, cyclic_algebra):
        """Тест: среднее по периоду перестановки равно среднему блоков."""
        x = cyclic_algebra.diag([3.0], [0.0], [0.0])
        a3 = average(make_request(cyclic_op, x, n_max=3), 3)
        assert a3.distance(cyclic_algebra.identity()) < 1e-12

    def test_average_matches_direct_sum(self, kraus_op, small_algebra, rng, central_weights):
        """Тест: A_n({b_j},{d_j},x) совпадает с прямой суммой T^j(b_j x d_j)."""
        x = random_element(rng, small_algebra)
        right = make_weight_sequence(small_algebra, {"kind": "trig", "terms": 2}, seed=4)
        req = make_request(kraus_op, x, left=central_weights, right=right, n_max=12)
        direct = small_algebra.zero()
        for j in range(12):
            direct = direct + apply_power(kraus_op, j, central_weights[j] @ x @ right[j])
        assert average(req, 12).distance(direct / 12) < 1e-12

    def test_subsequential_average_matches_direct_sum(self, unitary_op, small_algebra, rng, central_weights):
        """Тест: A_n^k совпадает с прямой суммой по k_j."""
        x = random_element(rng, small_algebra)
        k = squares_complement()
        req = make_request(unitary_op, x, left=central_weights, subsequence=k, n_max=9)
        direct = small_algebra.zero()
        for j in range(9):
            direct = direct + apply_power(unitary_op, k[j], central_weights[k[j]] @ x)
        assert subsequential_average(req, 9).distance(direct / 9) < 1e-12

    def test_sequence_has_every_average(self, kraus_op, small_algebra, rng):
        """Тест: average_sequence возвращает A_1, ..., A_N."""
        x = random_element(rng, small_algebra)
        req = make_request(kraus_op, x, n_max=7)
        seq = average_sequence(req)
        assert len(seq) == 7
        assert seq[0].distance(x) < 1e-12
        assert seq[4].distance(average(req, 5)) < 1e-12

    def test_horizon_checked(self, identity_op, small_algebra):
        """Тест: n вне [1, n_max] отклоняется."""
        req = make_request(identity_op, small_algebra.identity(), n_max=4)
        with pytest.raises(InvalidArgumentError):
            average(req, 5)
        with pytest.raises(InvalidArgumentError):
            average(req, 0)

    def test_subsequential_average_requires_subsequence(self, identity_op, small_algebra):
        """Тест: A_n^k без подпоследовательности дает PreconditionError."""
        req = make_request(identity_op, small_algebra.identity(), n_max=4)
        with pytest.raises(PreconditionError):
            subsequential_average(req, 2)


class TestRequestValidation:
    """Тесты для make_request и проверки гипотез."""

    def test_zero_horizon_rejected(self, identity_op, small_algebra):
        """Тест: n_max >= 1."""
        with pytest.raises(InvalidArgumentError):
            make_request(identity_op, small_algebra.identity(), n_max=0)

    def test_short_list_rejected(self, identity_op, small_algebra):
        """Тест: явная подпоследовательность короче горизонта отклоняется."""
        with pytest.raises(InvalidArgumentError):
            make_request(identity_op, small_algebra.identity(), subsequence=explicit_list([1, 2]), n_max=3)

    def test_foreign_element_rejected(self, cyclic_op, small_algebra):
        """Тест: элемент другой алгебры отклоняется."""
        with pytest.raises(InvalidArgumentError):
            make_request(cyclic_op, small_algebra.identity())

    def test_non_positive_operator_violates_hypothesis(self, small_algebra):
        """Тест: оператор без положительного сертификата дает HypothesisViolationError."""
        t = from_matrix(small_algebra, np.eye(small_algebra.coordinate_dim), positive=False)
        req = make_request(t, small_algebra.identity(), n_max=3)
        with pytest.raises(HypothesisViolationError) as info:
            average(req, 3)
        assert info.value.hypothesis == "positive-ds"

    def test_weight_bound(self, identity_op, small_algebra, central_weights):
        """Тест: C = sup‖b_j‖ · sup‖d_j‖."""
        req = make_request(identity_op, small_algebra.identity(), left=central_weights, right=central_weights)
        assert weight_bound(req) == pytest.approx(1.2**2)

    def test_unbounded_weights_violate_hypothesis(self, identity_op, small_algebra):
        """Тест: неограниченные веса дают HypothesisViolationError."""
        growing = WeightSequence(
            small_algebra, WeightKind.SCALAR, lambda j: small_algebra.identity() * (j + 1), None, True
        )
        req = make_request(identity_op, small_algebra.identity(), left=growing)
        with pytest.raises(HypothesisViolationError) as info:
            weight_bound(req)
        assert info.value.hypothesis == "bounded-weights"


class TestIdentities:
    """Тесты для тождеств переписывания и масштабирования."""

    @pytest.mark.parametrize("n", [1, 4, 16, 40])
    def test_rewrite_identity(self, kraus_op, small_algebra, rng, central_weights, n):
        """Тест: A_n^k({b_j}) = ((k_{n−1}+1)/n) · A_{k_{n−1}+1}({c_j b_j}) с точностью 1e-12."""
        x = random_element(rng, small_algebra)
        req = make_request(kraus_op, x, left=central_weights, subsequence=arithmetic(3, 1), n_max=40)
        assert rewrite_identity_check(req, n) <= 1e-12

    def test_rewrite_identity_without_weights(self, unitary_op, small_algebra, rng):
        """Тест: тождество переписывания для b_j = 1 и дополнения квадратов."""
        x = random_element(rng, small_algebra)
        req = make_request(unitary_op, x, subsequence=squares_complement(), n_max=30)
        assert rewrite_identity_check(req, 30) <= 1e-12

    def test_rewrite_defect_raises_when_strict(self, kraus_op, small_algebra, rng, central_weights, monkeypatch):
        """Тест: дефект сверх допуска дает CertificationError с величиной дефекта."""
        # без маски правая часть суммирует все j < k_{n−1}+1, а не только j ∈ k
        monkeypatch.setattr(averaging_module, "mask_by_indicator", lambda b, k: b)
        x = random_element(rng, small_algebra)
        req = make_request(kraus_op, x, left=central_weights, subsequence=arithmetic(3, 1), n_max=12)
        with pytest.raises(CertificationError) as info:
            rewrite_identity_check(req, 12)
        assert info.value.defects["rewrite_defect"] > 1e-12

    def test_rewrite_defect_reported_when_not_strict(self, kraus_op, small_algebra, rng, central_weights, monkeypatch):
        """Тест: при strict=False дефект возвращается без исключения."""
        monkeypatch.setattr(averaging_module, "mask_by_indicator", lambda b, k: b)
        x = random_element(rng, small_algebra)
        req = make_request(kraus_op, x, left=central_weights, subsequence=arithmetic(3, 1), n_max=12)
        assert rewrite_identity_check(req, 12, strict=False) > 1e-12

    def test_rewrite_identity_is_one_sided(self, identity_op, small_algebra, central_weights):
        """Тест: для двусторонних средних тождество не формулируется."""
        req = make_request(
            identity_op,
            small_algebra.identity(),
            left=central_weights,
            right=central_weights,
            subsequence=arithmetic(2),
            n_max=4,
        )
        with pytest.raises(PreconditionError):
            rewrite_identity_check(req, 4)

    @pytest.mark.parametrize("n", [3, 10, 25])
    def test_m_average_scaling(self, kraus_op, small_algebra, rng, central_weights, n):
        """Тест: A_n^k = (k_n / n) · M_n с точностью 1e-12."""
        x = random_element(rng, small_algebra)
        k = arithmetic(2, 1)
        req = make_request(kraus_op, x, left=central_weights, subsequence=k, n_max=n)
        lhs = subsequential_average(req, n)
        rhs = m_average(req, n) * (k[n] / n)
        assert lhs.distance(rhs) <= 1e-12

    def test_m_average_needs_next_index(self, identity_op, small_algebra):
        """Тест: M_n конечной последовательности требует k_n."""
        req = make_request(identity_op, small_algebra.identity(), subsequence=explicit_list([1, 2, 5]), n_max=3)
        with pytest.raises(InvalidArgumentError):
            m_average(req, 3)
