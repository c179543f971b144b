"""
Тесты для моделей сценария.
"""
import pytest
from pydantic import ValidationError

from ergolab.models.experiment import ExperimentType
from ergolab.models.scenario import (
    AlgebraSpec,
    ElementSpec,
    ExperimentParams,
    OperatorSpec,
    Scenario,
    SubsequenceSpec,
    WeightSpec,
)


class TestAlgebraSpec:
    """Тесты для AlgebraSpec."""

    def test_default_weights(self):
        """Тест: веса следа по умолчанию равны 1."""
        spec = AlgebraSpec(dims=[2, 1, 1])
        assert spec.weights == [1.0, 1.0, 1.0]

    def test_random_algebra(self):
        """Тест: случайная алгебра без явных размерностей."""
        spec = AlgebraSpec(random=True, max_total_dim=4)
        assert spec.dims is None
        assert spec.max_total_dim == 4

    @pytest.mark.parametrize(
        "data",
        [
            {},
            {"dims": []},
            {"dims": [0, 2]},
            {"dims": [2, 1], "weights": [1.0]},
            {"dims": [2], "weights": [-1.0]},
            {"random": True, "dims": [2]},
        ],
    )
    def test_invalid_layouts(self, data):
        """Тест: некорректные описания алгебры отклоняются."""
        with pytest.raises(ValidationError):
            AlgebraSpec(**data)


class TestComponentSpecs:
    """Тесты для описаний элемента, оператора, весов и подпоследовательности."""

    def test_element_payload_required(self):
        """Тест: diag и blocks требуют данных."""
        with pytest.raises(ValidationError):
            ElementSpec(type="diag")
        with pytest.raises(ValidationError):
            ElementSpec(type="blocks")
        assert ElementSpec(type="diag", diag=[[1.0]]).is_inline

    def test_element_scale_positive(self):
        """Тест: масштаб элемента > 0."""
        with pytest.raises(ValidationError):
            ElementSpec(scale=0.0)

    def test_mix_requires_matching_lengths(self):
        """Тест: число компонент смеси совпадает с числом весов."""
        with pytest.raises(ValidationError):
            OperatorSpec(type="mix", components=[{"type": "identity"}], probabilities=[0.5, 0.5])

    def test_nested_inline_matrices(self):
        """Тест: явные матрицы собираются из компонент смеси."""
        spec = OperatorSpec(
            type="mix",
            components=[{"type": "unitary", "unitary": [[[1]], [[1]]]}, {"type": "permutation", "permutation": [1, 0]}],
            probabilities=[0.5, 0.5],
        )
        assert spec.inline_matrices() == [[[[1]], [[1]]]]
        assert spec.permutations() == [[1, 0]]

    def test_permutation_required(self):
        """Тест: оператор-перестановка требует поля permutation."""
        with pytest.raises(ValidationError):
            OperatorSpec(type="permutation")

    def test_central_phase_rows(self):
        """Тест: плоский список фаз есть одно слагаемое, список списков несколько."""
        assert WeightSpec(kind="central", phases=[0.1, 0.2]).central_phase_rows() == [[0.1, 0.2]]
        assert WeightSpec(kind="central", phases=[[0.1, 0.2], [0.3, 0.4]]).central_phase_rows() == [
            [0.1, 0.2],
            [0.3, 0.4],
        ]
        assert WeightSpec(kind="scalar", phases=[0.1]).central_phase_rows() == []

    def test_weight_mapping_drops_missing_fields(self):
        """Тест: to_mapping не содержит незаданных полей."""
        mapping = WeightSpec(kind="trig", terms=2).to_mapping()
        assert mapping["kind"] == "trig"
        assert "phases" not in mapping
        assert mapping["perturbation"]["type"] == "none"

    @pytest.mark.parametrize(
        "data",
        [{"type": "list"}, {"type": "list", "values": []}, {"type": "rate"}, {"type": "rate", "density": 1.5}],
    )
    def test_invalid_subsequences(self, data):
        """Тест: list требует значений, rate требует плотности из (0, 1]."""
        with pytest.raises(ValidationError):
            SubsequenceSpec(**data)


class TestExperimentParams:
    """Тесты для ExperimentParams."""

    def test_defaults(self):
        """Тест: значения по умолчанию."""
        params = ExperimentParams()
        assert params.horizon == 64
        assert params.schedule == [64, 256, 1024]
        assert params.min_success_rate == 0.95
        assert params.theorem == "yeadon"

    @pytest.mark.parametrize(
        "data",
        [
            {"schedule": [64, 64]},
            {"schedule": []},
            {"gamma_grid": [1e-4, 1e-2]},
            {"gamma_grid": [0.0]},
            {"eps": []},
            {"eps": [0.5, -1.0]},
            {"horizon": 0},
            {"p": 0.5},
            {"min_success_rate": 1.5},
        ],
    )
    def test_invalid_params(self, data):
        """Тест: некорректные параметры отклоняются."""
        with pytest.raises(ValidationError):
            ExperimentParams(**data)


class TestScenario:
    """Тесты для корневой модели Scenario."""

    def test_valid_scenario(self, base_scenario):
        """Тест: базовый сценарий проходит валидацию."""
        scenario = Scenario(**base_scenario)
        assert scenario.experiment == ExperimentType.MAXIMAL_SEARCH
        assert scenario.algebra.dims == [2, 1]
        assert scenario.phi == "p:2"

    def test_with_seed(self, base_scenario):
        """Тест: with_seed возвращает копию с новым зерном."""
        scenario = Scenario(**base_scenario)
        other = scenario.with_seed(99)
        assert other.seed == 99
        assert scenario.seed == base_scenario["seed"]

    def test_wrong_spec_version(self, base_scenario):
        """Тест: поддерживается только версия схемы 1."""
        with pytest.raises(ValidationError):
            Scenario(**{**base_scenario, "spec_version": 2})

    def test_unknown_experiment(self, base_scenario):
        """Тест: неизвестный тип эксперимента отклоняется."""
        with pytest.raises(ValidationError):
            Scenario(**{**base_scenario, "experiment": "bogus"})

    def test_invalid_id(self, base_scenario):
        """Тест: идентификатор используется как имя директории."""
        with pytest.raises(ValidationError):
            Scenario(**{**base_scenario, "id": "../escape"})

    @pytest.mark.parametrize("phi", ["p:0.5", "cosh", ""])
    def test_invalid_phi(self, base_scenario, phi):
        """Тест: неизвестная функция Орлича отклоняется."""
        with pytest.raises(ValidationError):
            Scenario(**{**base_scenario, "phi": phi})

    def test_diag_lengths_checked(self, base_scenario):
        """Тест: длины диагоналей совпадают с размерностями блоков."""
        data = {**base_scenario, "element": {"type": "diag", "diag": [[1.0], [1.0]]}}
        with pytest.raises(ValidationError):
            Scenario(**data)

    def test_inline_unitary_size_checked(self, base_scenario):
        """Тест: блоки явного унитарного элемента соответствуют алгебре."""
        data = {**base_scenario, "operator": {"type": "unitary", "unitary": [[[1, 0], [0, 1]], [[1, 0], [0, 1]]]}}
        with pytest.raises(ValidationError):
            Scenario(**data)

    def test_permutation_length_checked(self, base_scenario):
        """Тест: перестановка содержит по элементу на блок."""
        data = {**base_scenario, "operator": {"type": "permutation", "permutation": [0, 1, 2]}}
        with pytest.raises(ValidationError):
            Scenario(**data)

    def test_central_phases_checked(self, base_scenario):
        """Тест: набор центральных фаз содержит по фазе на блок."""
        data = {**base_scenario, "left": {"kind": "central", "phases": [[0.1, 0.2, 0.3]]}}
        with pytest.raises(ValidationError):
            Scenario(**data)

    def test_random_algebra_forbids_inline_objects(self, base_scenario):
        """Тест: явные диагонали не могут ссылаться на случайную алгебру."""
        data = {**base_scenario, "algebra": {"random": True}}
        with pytest.raises(ValidationError):
            Scenario(**data)

    def test_random_algebra_with_random_objects(self, base_scenario):
        """Тест: случайная алгебра со случайным элементом допустима."""
        data = {**base_scenario, "algebra": {"random": True}, "element": {"type": "random-positive"}}
        scenario = Scenario(**data)
        assert scenario.algebra.random
