"""
Этот модуль содержит ScenarioBuilder, который превращает провалидированные
описания сценария в объекты вычислительного ядра.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from ergolab.core.algebra import AlgebraElement, TracialAlgebra, make_algebra
from ergolab.core.averaging import AverageRequest, make_request
from ergolab.core.operators import DSOperator, from_kraus, from_permutation, from_unitary, identity_operator, mix
from ergolab.core.orlicz import OrliczFunction, orlicz_from_name
from ergolab.core.sampling import (
    random_algebra,
    random_element,
    random_positive,
    random_self_adjoint,
    random_unitary,
    spawn_rng,
)
from ergolab.core.subsequences import Subsequence, make_subsequence
from ergolab.core.weights import WeightSequence, make_weight_sequence, parse_complex
from ergolab.models.scenario import AlgebraSpec, ElementSpec, Matrix, OperatorSpec, Scenario, SubsequenceSpec, WeightSpec

WEIGHT_SEED_RANGE = 2**31


def parse_matrix(matrix: Matrix) -> np.ndarray:
    """Матрица из строк, элементы которых числа или пары [re, im]."""
    return np.array([[parse_complex(v) for v in row] for row in matrix], dtype=np.complex128)


@dataclass(frozen=True)
class Instance:
    """Один экземпляр сценария: все объекты, построенные из потока (seed, index)."""
    index: int
    algebra: TracialAlgebra
    element: AlgebraElement
    operator: DSOperator
    left: Optional[WeightSequence]
    right: Optional[WeightSequence]
    subsequence: Optional[Subsequence]

    def request(self, n_max: int, element: Optional[AlgebraElement] = None) -> AverageRequest:
        return make_request(
            self.operator,
            self.element if element is None else element,
            left=self.left,
            right=self.right,
            subsequence=self.subsequence,
            n_max=n_max,
        )


class ScenarioBuilder:
    """
    Сервис построения объектов по описаниям сценария.

    Порядок выборок из генератора фиксирован: алгебра, элемент, оператор,
    зерно левых весов, зерно правых весов. Поэтому пара (seed, index)
    полностью определяет экземпляр.
    """

    def __init__(self) -> None:
        self._logger = logging.getLogger(__name__)

    def build_instance(self, scenario: Scenario, seed: int, index: int = 0) -> Instance:
        """
        Строит экземпляр `index` сценария.

        :raises InvalidArgumentError: Если описание не задает допустимый объект
            (неунитарная матрица, несуммируемое возмущение и т.п.).
        """
        rng = spawn_rng(seed, index)
        algebra = self.build_algebra(scenario.algebra, rng)
        element = self.build_element(scenario.element, algebra, rng)
        operator = self.build_operator(scenario.operator, algebra, rng)
        left_seed = int(rng.integers(WEIGHT_SEED_RANGE))
        right_seed = int(rng.integers(WEIGHT_SEED_RANGE))
        left = self.build_weights(scenario.left, algebra, left_seed)
        right = self.build_weights(scenario.right, algebra, right_seed)
        subsequence = self.build_subsequence(scenario.subsequence)
        self._logger.debug(
            f"Экземпляр {index} сценария '{scenario.id}': алгебра {algebra.block_dims}, оператор {operator.describe()}"
        )
        return Instance(index, algebra, element, operator, left, right, subsequence)

    def build_algebra(self, spec: AlgebraSpec, rng: np.random.Generator) -> TracialAlgebra:
        if spec.random:
            return random_algebra(rng, max_total_dim=spec.max_total_dim, max_blocks=spec.max_blocks)
        return make_algebra(spec.dims or [], spec.weights or [])

    def build_element(self, spec: ElementSpec, algebra: TracialAlgebra, rng: np.random.Generator) -> AlgebraElement:
        if spec.type == "random":
            return random_element(rng, algebra, spec.scale)
        if spec.type == "random-positive":
            return random_positive(rng, algebra, spec.scale)
        if spec.type == "random-self-adjoint":
            return random_self_adjoint(rng, algebra, spec.scale)
        if spec.type == "diag":
            return algebra.diag(*[[parse_complex(v) * spec.scale for v in d] for d in spec.diag or []])
        if spec.type == "blocks":
            return AlgebraElement(algebra, [parse_matrix(b) * spec.scale for b in spec.blocks or []])
        return algebra.identity() * spec.scale

    def _inline(self, algebra: TracialAlgebra, blocks: List[Matrix]) -> AlgebraElement:
        return AlgebraElement(algebra, [parse_matrix(b) for b in blocks])

    def build_operator(self, spec: OperatorSpec, algebra: TracialAlgebra, rng: np.random.Generator) -> DSOperator:
        """
        Строит оператор; отсутствующие матрицы выбираются случайно.

        Случайный канал Крауса есть смесь сопряжений K_i = √p_i U_i с весами
        p из распределения Дирихле, поэтому он дважды стохастичен.
        """
        if spec.type == "identity":
            return identity_operator(algebra)
        if spec.type == "unitary":
            u = self._inline(algebra, spec.unitary) if spec.unitary is not None else random_unitary(rng, algebra)
            return from_unitary(u)
        if spec.type == "kraus":
            if spec.kraus is not None:
                return from_kraus([self._inline(algebra, k) for k in spec.kraus])
            probabilities = rng.dirichlet(np.ones(spec.terms))
            return from_kraus([random_unitary(rng, algebra) * float(np.sqrt(p)) for p in probabilities])
        if spec.type == "permutation":
            return from_permutation(algebra, spec.permutation or [])
        components = [self.build_operator(c, algebra, rng) for c in spec.components or []]
        return mix(components, spec.probabilities or [])

    def build_weights(self, spec: Optional[WeightSpec], algebra: TracialAlgebra, seed: int) -> Optional[WeightSequence]:
        if spec is None:
            return None
        return make_weight_sequence(algebra, spec.to_mapping(), seed)

    def build_subsequence(self, spec: Optional[SubsequenceSpec]) -> Optional[Subsequence]:
        if spec is None:
            return None
        return make_subsequence(spec.to_mapping())

    def build_phi(self, name: str) -> OrliczFunction:
        return orlicz_from_name(name)
