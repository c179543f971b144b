"""
Жадный поиск проекции e, при которой сжатия семейства элементов малы:
sup_n ‖e A_n e‖ (или ‖A_n e‖ в одностороннем режиме) не превосходит
заданного уровня, а τ(e⊥) укладывается в бюджет.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from scipy import linalg

from .algebra import AlgebraElement, Projection
from .errors import InvalidArgumentError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PeelResult:
    projection: Projection
    achieved_sup: float
    trace_defect: float
    success: bool
    removed: int


def _block_norms(stack: npt.NDArray[np.complex128], basis: npt.NDArray[np.complex128], one_sided: bool) -> npt.NDArray[np.float64]:
    if basis.shape[1] == 0:
        return np.zeros(stack.shape[0])
    compressed = stack @ basis if one_sided else basis.conj().T @ stack @ basis
    return np.linalg.norm(compressed, ord=2, axis=(1, 2))


def compressed_norms(
    elements: Sequence[AlgebraElement], projection: Projection, one_sided: bool = False
) -> npt.NDArray[np.float64]:
    """‖e x_n e‖ (или ‖x_n e‖) для каждого n."""
    per_element = np.zeros(len(elements))
    for i, basis in enumerate(projection.range_bases()):
        stack = np.stack([x.blocks[i] for x in elements])
        per_element = np.maximum(per_element, _block_norms(stack, basis, one_sided))
    return per_element


def compressed_sup(
    elements: Sequence[AlgebraElement], projection: Projection, one_sided: bool = False
) -> float:
    """max_n ‖e x_n e‖ (или max_n ‖x_n e‖)."""
    return float(compressed_norms(elements, projection, one_sided).max(initial=0.0))


def peel(
    elements: Sequence[AlgebraElement],
    level: float,
    budget: float,
    strict: bool = False,
    one_sided: bool = False,
    start: Optional[Projection] = None,
) -> PeelResult:
    """
    Последовательно удаляет из образа e верхний собственный вектор худшего
    сжатия, пока sup сжатий больше `level` и удаление помещается в бюджет.

    Сжатие на меньшую проекцию не увеличивает норму, поэтому последнее
    состояние является лучшим.

    :param elements: Семейство x_1, ..., x_N одной алгебры.
    :param level: Требуемая граница для sup сжатий.
    :param budget: Допустимая следовая масса τ(e⊥).
    :param strict: Требовать τ(e⊥) < budget вместо τ(e⊥) <= budget.
    :param one_sided: Сжимать только справа: ‖x_n e‖.
    :param start: Начальная проекция (по умолчанию 1).
    """
    if not elements:
        raise InvalidArgumentError("Семейство элементов для поиска проекции пусто")
    algebra = elements[0].algebra
    stacks = [np.stack([x.blocks[i] for x in elements]) for i in range(algebra.n_blocks)]
    bases: List[npt.NDArray[np.complex128]] = (
        [np.asarray(b) for b in start.range_bases()]
        if start is not None
        else [np.eye(d, dtype=np.complex128) for d in algebra.block_dims]
    )
    defect = float(sum(w * (d - b.shape[1]) for w, d, b in zip(algebra.trace_weights, algebra.block_dims, bases)))

    def fits(extra: float) -> bool:
        return defect + extra < budget if strict else defect + extra <= budget

    removed = 0
    while True:
        worst: Tuple[float, int, int] = (0.0, -1, -1)
        for i, (stack, basis) in enumerate(zip(stacks, bases)):
            norms = _block_norms(stack, basis, one_sided)
            if norms.size and norms.max() > worst[0]:
                n = int(np.argmax(norms))
                worst = (float(norms[n]), i, n)
        sup, block, n = worst
        if block < 0 or sup <= level:
            success = fits(0.0)
            break
        if not fits(algebra.trace_weights[block]):
            success = False
            break
        basis = bases[block]
        a = stacks[block][n]
        if one_sided:
            c = a @ basis
            gram = c.conj().T @ c
        else:
            c = basis.conj().T @ a @ basis
            gram = c.conj().T @ c + c @ c.conj().T
        _, vecs = linalg.eigh(gram)
        top = vecs[:, -1]
        bases[block] = basis @ linalg.null_space(top[None, :].conj())
        defect += algebra.trace_weights[block]
        removed += 1

    projection = Projection.from_ranges(algebra, bases)
    logger.debug(
        f"Пилинг: удалено {removed} векторов, sup = {sup:.3e}, τ(e⊥) = {defect:.6g}, успех = {success}"
    )
    return PeelResult(projection, sup, projection.complement_mass, success, removed)
