"""
Общие fixtures для всех тестов ergolab.
"""
import json
import shutil
import tempfile
from pathlib import Path
from typing import Any, Callable, Dict

import numpy as np
import pytest

from ergolab.core.algebra import TracialAlgebra, make_algebra
from ergolab.core.operators import DSOperator, from_kraus, from_permutation, from_unitary, identity_operator
from ergolab.core.sampling import make_rng, random_unitary
from ergolab.services.builder import ScenarioBuilder
from ergolab.services.fs import FileSystemService
from ergolab.services.runner import ScenarioRunner
from ergolab.services.suite import SuiteService
from ergolab.services.template import TemplateService

REPO_ROOT = Path(__file__).resolve().parent.parent


@pytest.fixture
def temp_dir():
    """Создает временную директорию для тестов."""
    temp_path = Path(tempfile.mkdtemp())
    yield temp_path
    shutil.rmtree(temp_path, ignore_errors=True)


@pytest.fixture
def fs_service():
    """Возвращает экземпляр FileSystemService."""
    return FileSystemService()


@pytest.fixture
def template_service():
    """Возвращает экземпляр TemplateService."""
    return TemplateService()


@pytest.fixture
def builder():
    """Возвращает экземпляр ScenarioBuilder."""
    return ScenarioBuilder()


@pytest.fixture
def runner(fs_service, builder, template_service):
    """Возвращает экземпляр ScenarioRunner."""
    return ScenarioRunner(fs_service, builder, template_service)


@pytest.fixture
def suite_service(fs_service, runner):
    """Возвращает экземпляр SuiteService."""
    return SuiteService(fs_service, runner)


@pytest.fixture
def rng() -> np.random.Generator:
    """Генератор с фиксированным зерном."""
    return make_rng(12345)


@pytest.fixture
def small_algebra() -> TracialAlgebra:
    """M_2(C) ⊕ C со следом Tr(x_0) + 0.5 · x_1."""
    return make_algebra([2, 1], [1.0, 0.5])


@pytest.fixture
def cyclic_algebra() -> TracialAlgebra:
    """C ⊕ C ⊕ C с равными весами, для циклической перестановки блоков."""
    return make_algebra([1, 1, 1], [1.0, 1.0, 1.0])


@pytest.fixture
def identity_op(small_algebra) -> DSOperator:
    return identity_operator(small_algebra)


@pytest.fixture
def unitary_op(small_algebra) -> DSOperator:
    """Сопряжение случайным унитарным элементом."""
    return from_unitary(random_unitary(make_rng(7), small_algebra))


@pytest.fixture
def kraus_op(small_algebra) -> DSOperator:
    """Дважды стохастический канал: смесь двух унитарных сопряжений."""
    rng = make_rng(11)
    u1, u2 = random_unitary(rng, small_algebra), random_unitary(rng, small_algebra)
    return from_kraus([u1 * np.sqrt(0.3), u2 * np.sqrt(0.7)])


@pytest.fixture
def cyclic_op(cyclic_algebra) -> DSOperator:
    """Циклическая перестановка блоков периода 3."""
    return from_permutation(cyclic_algebra, [1, 2, 0])


@pytest.fixture
def scenarios_dir() -> Path:
    """Директория со встроенными сценариями."""
    return REPO_ROOT / "scenarios"


@pytest.fixture
def base_scenario() -> Dict[str, Any]:
    """Минимальный валидный сценарий maximal-search."""
    return {
        "spec_version": 1,
        "id": "unit_yeadon",
        "experiment": "maximal-search",
        "seed": 0,
        "algebra": {"dims": [2, 1], "weights": [1.0, 0.5]},
        "element": {"type": "diag", "diag": [[3.0, 0.2], [1.5]]},
        "operator": {"type": "identity"},
        "params": {"theorem": "yeadon", "eps": [1.0], "horizon": 16},
    }


@pytest.fixture
def write_scenario(temp_dir) -> Callable[[Dict[str, Any], str], Path]:
    """Возвращает функцию, которая пишет сценарий в JSON-файл временной директории."""

    def write(data: Dict[str, Any], name: str = "scenario.json") -> Path:
        path = temp_dir / "scenarios" / name
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return write
