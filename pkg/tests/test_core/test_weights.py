"""
Тесты для тригонометрических полиномов и последовательностей Безиковича.
"""
import math

import numpy as np
import pytest

from ergolab.core.algebra import CenterElement, operator_norm
from ergolab.core.errors import InvalidArgumentError
from ergolab.core.sampling import random_element, random_unitary
from ergolab.core.subsequences import arithmetic
from ergolab.core.weights import (
    TrigPolynomial,
    WeightKind,
    besicovitch_error,
    central_shift_parts,
    central_shift_sequences,
    eval_trig,
    make_central_besicovitch,
    make_weight_sequence,
    mask_by_indicator,
    parse_complex,
    turns_to_phase,
    unit_weights,
)


class TestHelpers:
    """Тесты для разбора фаз и комплексных чисел."""

    def test_turns_to_phase(self):
        """Тест: четверть оборота дает i."""
        assert turns_to_phase(0.25) == pytest.approx(1j)
        assert turns_to_phase(1.0) == pytest.approx(1.0)

    @pytest.mark.parametrize("value, expected", [(2, 2 + 0j), ([0.5, -1.0], 0.5 - 1j), ((0.0, 2.0), 2j)])
    def test_parse_complex(self, value, expected):
        """Тест: число или пара [re, im]."""
        assert parse_complex(value) == expected

    def test_parse_complex_rejects_triples(self):
        """Тест: тройка чисел не является комплексным числом."""
        with pytest.raises(InvalidArgumentError):
            parse_complex([1.0, 2.0, 3.0])


class TestTrigPolynomial:
    """Тесты для TrigPolynomial и eval_trig."""

    def test_central_polynomial_is_exact(self, small_algebra):
        """Тест: ψ(k) = Σ z_j u_j^k для центральных фаз."""
        u = CenterElement(small_algebra, [turns_to_phase(0.1), turns_to_phase(0.3)])
        psi = TrigPolynomial([0.5, 0.5], [u, small_algebra.identity()])
        value = eval_trig(psi, 7)
        assert isinstance(value, CenterElement)
        expected = 0.5 * np.exp(2j * np.pi * 0.7) + 0.5
        assert value.scalars[0] == pytest.approx(expected)
        assert psi.bound == pytest.approx(1.0)

    def test_general_polynomial_uses_unitary_powers(self, small_algebra, rng):
        """Тест: нецентральный ψ(k) совпадает с прямым вычислением степеней."""
        u = random_unitary(rng, small_algebra)
        psi = TrigPolynomial([2.0], [u])
        assert not psi.is_central
        assert operator_norm(psi.evaluate(5) - 2.0 * u.power(5)) < 1e-12
        assert operator_norm(psi.evaluate(3) - 2.0 * u.power(3)) < 1e-12

    def test_non_unitary_rejected(self, small_algebra):
        """Тест: неунитарный u_j отклоняется."""
        with pytest.raises(InvalidArgumentError):
            TrigPolynomial([1.0], [small_algebra.identity() * 2.0])

    def test_mismatched_lengths_rejected(self, small_algebra):
        """Тест: число коэффициентов совпадает с числом унитарных элементов."""
        with pytest.raises(InvalidArgumentError):
            TrigPolynomial([1.0, 2.0], [small_algebra.identity()])

    def test_negative_index_rejected(self, small_algebra):
        """Тест: ψ(k) определен для k >= 0."""
        psi = TrigPolynomial([1.0], [small_algebra.identity()])
        with pytest.raises(InvalidArgumentError):
            eval_trig(psi, -1)


class TestWeightSequences:
    """Тесты для make_weight_sequence и связанных операций."""

    def test_unit_weights(self, small_algebra):
        """Тест: b_j = 1, C = 1, веса центральны."""
        b = unit_weights(small_algebra)
        assert b.is_central and b.bound == 1.0
        assert b[17].distance(small_algebra.identity()) == 0.0

    def test_central_phases(self, small_algebra):
        """Тест: центральные веса b_j = e^{2πiθ_i j} по блокам."""
        b = make_weight_sequence(small_algebra, {"kind": "central", "phases": [[0.21, 0.4]]}, seed=0)
        assert b.is_central
        assert b.kind == WeightKind.CENTRAL_SCALAR
        assert b.bound == pytest.approx(1.0)
        assert b[3].scalars[0] == pytest.approx(turns_to_phase(0.63))
        assert b[3].scalars[1] == pytest.approx(turns_to_phase(1.2))

    def test_flat_phase_list_is_one_term(self, small_algebra):
        """Тест: плоский список фаз задает одно слагаемое."""
        b = make_weight_sequence(small_algebra, {"kind": "central", "phases": [0.21, 0.4]}, seed=0)
        assert b[1].scalars[1] == pytest.approx(turns_to_phase(0.4))

    def test_scalar_weights(self, small_algebra):
        """Тест: скалярные веса одинаковы во всех блоках."""
        b = make_weight_sequence(small_algebra, {"kind": "scalar", "phases": [0.1, 0.2]}, seed=0)
        value = b[4]
        assert value.scalars[0] == pytest.approx(value.scalars[1])
        assert b.kind == WeightKind.SCALAR

    def test_trig_weights_are_not_central(self, small_algebra):
        """Тест: общий полином со случайными унитарными не лежит в центре."""
        b = make_weight_sequence(small_algebra, {"kind": "trig", "terms": 2}, seed=3)
        assert not b.is_central
        assert b.kind == WeightKind.TRIG
        assert b.bound == pytest.approx(1.0)

    def test_weights_are_reproducible(self, small_algebra):
        """Тест: одно зерно дает одну последовательность."""
        spec = {"kind": "trig", "terms": 2, "perturbation": {"type": "harmonic", "eps0": 0.3}}
        a = make_weight_sequence(small_algebra, spec, seed=11)
        b = make_weight_sequence(small_algebra, spec, seed=11)
        assert all(a[j].distance(b[j]) == 0.0 for j in range(6))

    def test_harmonic_perturbation(self, small_algebra):
        """Тест: ошибка Безиковича равна eps0 · H_n / n, граница увеличивается на eps0."""
        spec = {"kind": "central", "phases": [[0.1, 0.2]], "perturbation": {"type": "harmonic", "eps0": 0.5}}
        b = make_weight_sequence(small_algebra, spec, seed=5)
        assert b.bound == pytest.approx(1.5)
        n = 100
        harmonic = sum(1.0 / (j + 1) for j in range(n))
        assert besicovitch_error(b, b.base, n) == pytest.approx(0.5 * harmonic / n, rel=1e-9)
        assert besicovitch_error(b, b.base, 1000) < besicovitch_error(b, b.base, n)

    def test_power_perturbation_requires_positive_exponent(self, small_algebra):
        """Тест: eps0/(j+1)^0 не стремится к нулю и отклоняется."""
        spec = {"kind": "central", "phases": [[0.1, 0.2]], "perturbation": {"type": "power", "eps0": 0.5, "exponent": 0}}
        with pytest.raises(InvalidArgumentError):
            make_weight_sequence(small_algebra, spec, seed=0)

    @pytest.mark.parametrize(
        "spec",
        [
            {"kind": "bogus"},
            {"kind": "central"},
            {"kind": "central", "phases": [[0.1]]},
            {"kind": "central", "phases": [[0.1, 0.2]], "coefficients": [1.0, 2.0]},
            {"kind": "central", "phases": [[0.1, 0.2]], "perturbation": {"type": "cubic"}},
        ],
    )
    def test_invalid_specs_rejected(self, small_algebra, spec):
        """Тест: некорректные описания весов отклоняются."""
        with pytest.raises(InvalidArgumentError):
            make_weight_sequence(small_algebra, spec, seed=0)

    def test_central_besicovitch_rejects_trig(self, small_algebra):
        """Тест: общий полином не является центральной последовательностью."""
        with pytest.raises(InvalidArgumentError):
            make_central_besicovitch(small_algebra, {"kind": "trig"}, seed=0)

    def test_negative_index_rejected(self, small_algebra):
        """Тест: b_j определен для j >= 0."""
        with pytest.raises(InvalidArgumentError):
            unit_weights(small_algebra)[-1]


class TestMaskAndShift:
    """Тесты для mask_by_indicator, central_shift_parts и central_shift_sequences."""

    def test_mask_by_indicator(self, small_algebra):
        """Тест: c_j b_j обнуляет веса вне подпоследовательности."""
        b = make_weight_sequence(small_algebra, {"kind": "central", "phases": [[0.1, 0.2]]}, seed=0)
        masked = mask_by_indicator(b, arithmetic(2))
        assert masked.is_central and masked.bound == b.bound
        assert masked[3].operator_norm() == 0.0
        assert masked[4].distance(b[4]) == 0.0

    def test_shift_parts_rebuild_product(self, small_algebra, rng):
        """Тест: b x = (Re b + C)x + i(Im b + C)x − (1 + i)Cx."""
        b = small_algebra.central([0.3 - 0.4j, -0.5j])
        C = 1.0
        re, im = central_shift_parts(b, C)
        assert np.all(re.scalars.real >= 0) and np.all(im.scalars.real >= 0)
        x = random_element(rng, small_algebra)
        rebuilt = re @ x + 1j * (im @ x) - (1 + 1j) * C * x
        assert rebuilt.distance(b @ x) < 1e-12

    def test_shift_sequences_are_positive_and_bounded(self, small_algebra):
        """Тест: Re(b_j) + C и Im(b_j) + C центральны, лежат в [0, 2C] и восстанавливают b_j."""
        b = make_weight_sequence(small_algebra, {"kind": "scalar", "phases": [0.1, 0.37], "coefficients": [1.5, 0.8]}, seed=0)
        re, im = central_shift_sequences(b)
        assert re.is_central and im.is_central
        assert re.bound == pytest.approx(4.6) and im.bound == pytest.approx(4.6)
        for j in range(12):
            for s in (re[j], im[j]):
                assert np.all(s.scalars.real >= -1e-12)
                assert np.all(s.scalars.real <= 4.6 + 1e-12)
                assert np.all(np.abs(s.scalars.imag) < 1e-15)
            rebuilt = CenterElement(small_algebra, re[j].scalars + 1j * im[j].scalars - (1 + 1j) * 2.3)
            assert rebuilt.distance(b[j]) < 1e-12

    def test_shift_sequences_require_central_weights(self, small_algebra):
        """Тест: нецентральные веса не сдвигаются."""
        b = make_weight_sequence(small_algebra, {"kind": "trig"}, seed=0)
        with pytest.raises(InvalidArgumentError):
            central_shift_sequences(b)

    def test_phase_angle_identity(self):
        """Тест: фаза в оборотах согласована с экспонентой."""
        assert turns_to_phase(0.125) == pytest.approx(complex(math.cos(math.pi / 4), math.sin(math.pi / 4)))
