"""
Этот модуль содержит Pydantic модели для парсинга и валидации
файлов сценариев (JSON или YAML).

Сценарий описывает алгебру, элемент, оператор, весовые последовательности,
подпоследовательность, функцию Орлича и параметры одного эксперимента.
Все случайные объекты строятся из `seed`, поэтому сценарий с фиксированным
зерном воспроизводим побайтно.
"""
from typing import Any, List, Literal, Optional, Tuple

from pydantic import BaseModel, Field, field_validator, model_validator

from ergolab.core.errors import InvalidArgumentError
from ergolab.core.orlicz import orlicz_from_name
from .experiment import ExperimentType

Matrix = List[List[Any]]


def _square_size(matrix: Matrix, what: str) -> int:
    size = len(matrix)
    if size == 0 or any(len(row) != size for row in matrix):
        raise ValueError(f"{what}: ожидается квадратная непустая матрица")
    return size


def _check_blocks(blocks: List[Matrix], dims: List[int], what: str) -> None:
    if len(blocks) != len(dims):
        raise ValueError(f"{what}: ожидается {len(dims)} блоков, получено {len(blocks)}")
    for i, (block, d) in enumerate(zip(blocks, dims)):
        size = _square_size(block, f"{what}, блок {i}")
        if size != d:
            raise ValueError(f"{what}: блок {i} имеет размер {size}, а алгебра требует {d}")


class AlgebraSpec(BaseModel):
    """
    Описание алгебры M = ⊕ M_{d_i} со следом τ = Σ w_i · Tr_i.
    """
    dims: Optional[List[int]] = None
    """
    Что делает: Размерности блоков d_i.
    Форма: Список целых >= 1. Не задается при `random: true`.
    Пример: [2, 1]
    """
    weights: Optional[List[float]] = None
    """
    Что делает: Веса следа w_i; по умолчанию все веса равны 1.
    Форма: Список положительных чисел той же длины, что и `dims`.
    Пример: [1.0, 0.5]
    """
    random: bool = False
    """
    Что делает: Для каждого экземпляра серии строить новую случайную алгебру.
    Форма: `true` или `false`.
    """
    max_total_dim: int = Field(default=6, ge=1)
    """
    Что делает: Верхняя граница Σ d_i для случайных алгебр.
    Пример: 6
    """
    max_blocks: int = Field(default=3, ge=1)

    @model_validator(mode="after")
    def validate_layout(self) -> "AlgebraSpec":
        """
        Валидация: алгебра задается либо явно (`dims`), либо случайно (`random`).
        """
        if self.random:
            if self.dims is not None or self.weights is not None:
                raise ValueError("Случайная алгебра не может одновременно иметь явные 'dims' или 'weights'")
            return self
        if not self.dims:
            raise ValueError("Алгебра должна задавать 'dims' или 'random: true'")
        if any(d < 1 for d in self.dims):
            raise ValueError(f"Размерности блоков должны быть >= 1, получено {self.dims}")
        if self.weights is None:
            self.weights = [1.0] * len(self.dims)
        if len(self.weights) != len(self.dims):
            raise ValueError(
                f"Число весов следа ({len(self.weights)}) не совпадает с числом блоков ({len(self.dims)})"
            )
        if any(w <= 0 for w in self.weights):
            raise ValueError(f"Веса следа должны быть > 0, получено {self.weights}")
        return self


class ElementSpec(BaseModel):
    """
    Описание элемента x алгебры.
    """
    type: Literal["random", "random-positive", "random-self-adjoint", "diag", "blocks", "identity"] = "random"
    """
    Что делает: Способ построения x.
    Форма: Одна из строк: "random", "random-positive", "random-self-adjoint",
    "diag", "blocks", "identity".
    """
    scale: float = Field(default=1.0, gt=0)
    """
    Что делает: Множитель (для случайных элементов: масштаб распределения).
    Пример: 2.0
    """
    diag: Optional[List[List[Any]]] = None
    """
    Что делает: Диагонали блоков для `type: diag`.
    Форма: Список списков чисел (число или пара [re, im]).
    Пример: [[3.0, 0.2], [1.5]]
    """
    blocks: Optional[List[Matrix]] = None
    """
    Что делает: Матрицы блоков для `type: blocks`.
    Форма: Список квадратных матриц, элементы которых числа или пары [re, im].
    """

    @model_validator(mode="after")
    def validate_payload(self) -> "ElementSpec":
        if self.type == "diag" and not self.diag:
            raise ValueError("Элемент типа 'diag' требует поля 'diag'")
        if self.type == "blocks" and not self.blocks:
            raise ValueError("Элемент типа 'blocks' требует поля 'blocks'")
        return self

    @property
    def is_inline(self) -> bool:
        return self.type in ("diag", "blocks")


class OperatorSpec(BaseModel):
    """
    Описание положительного оператора Данфорда-Шварца T.
    """
    type: Literal["identity", "unitary", "kraus", "permutation", "mix"] = "unitary"
    """
    Что делает: Конструктор оператора.
    Форма: Одна из строк: "identity", "unitary", "kraus", "permutation", "mix".
    """
    unitary: Optional[List[Matrix]] = None
    """
    Что делает: Блоки унитарного элемента u для T(x) = u* x u; без поля u
    выбирается случайно.
    """
    kraus: Optional[List[List[Matrix]]] = None
    """
    Что делает: Операторы Крауса K_i (каждый как список блоков); без поля
    строится случайная смесь унитарных сопряжений.
    """
    terms: int = Field(default=2, ge=1)
    """
    Что делает: Число слагаемых случайного канала Крауса.
    """
    permutation: Optional[List[int]] = None
    """
    Что делает: Перестановка блоков π для T(x)_i = x_{π(i)}.
    Пример: [1, 0]
    """
    components: Optional[List["OperatorSpec"]] = None
    """
    Что делает: Компоненты выпуклой смеси для `type: mix`.
    """
    probabilities: Optional[List[float]] = None
    """
    Что делает: Веса выпуклой смеси; неотрицательны и в сумме дают 1.
    Пример: [0.25, 0.75]
    """

    @model_validator(mode="after")
    def validate_payload(self) -> "OperatorSpec":
        if self.type == "permutation" and self.permutation is None:
            raise ValueError("Оператор типа 'permutation' требует поля 'permutation'")
        if self.type == "mix":
            if not self.components or not self.probabilities:
                raise ValueError("Оператор типа 'mix' требует полей 'components' и 'probabilities'")
            if len(self.components) != len(self.probabilities):
                raise ValueError(
                    f"Число компонент смеси ({len(self.components)}) не совпадает "
                    f"с числом весов ({len(self.probabilities)})"
                )
        return self

    def inline_matrices(self) -> List[List[Matrix]]:
        """Все явно заданные наборы блоков (u, K_i и компоненты смеси)."""
        found: List[List[Matrix]] = []
        if self.unitary is not None:
            found.append(self.unitary)
        found.extend(self.kraus or [])
        for component in self.components or []:
            found.extend(component.inline_matrices())
        return found

    def permutations(self) -> List[List[int]]:
        found = [self.permutation] if self.permutation is not None else []
        for component in self.components or []:
            found.extend(component.permutations())
        return found


class PerturbationSpec(BaseModel):
    """
    Возмущение δ_j · c тригонометрического полинома, δ_j → 0.
    """
    type: Literal["none", "harmonic", "power"] = "none"
    """
    Что делает: Закон убывания: harmonic дает eps0/(j+1), power дает eps0/(j+1)^exponent.
    """
    eps0: float = Field(default=0.0, ge=0)
    exponent: float = 1.0


class WeightSpec(BaseModel):
    """
    Описание весовой последовательности Безиковича b_j = ψ(j) + δ_j · c.
    """
    kind: Literal["unit", "central", "scalar", "trig"] = "unit"
    """
    Что делает: Вид весов: единичные, центральные (фазы по блокам),
    скалярные или общий тригонометрический полином со случайными унитарными.
    """
    phases: Optional[List[Any]] = None
    """
    Что делает: Фазы в оборотах (1 оборот = 2π). Для `central` плоский список
    задает одно слагаемое (по фазе на блок), список списков задает несколько.
    Для `scalar` по одной фазе на слагаемое.
    Пример: [[0.1234, 0.37]]
    """
    coefficients: Optional[List[Any]] = None
    """
    Что делает: Коэффициенты z_l полинома; по умолчанию 1/m.
    Форма: Числа или пары [re, im].
    """
    terms: int = Field(default=1, ge=1)
    """
    Что делает: Число слагаемых для `trig`.
    """
    perturbation: PerturbationSpec = Field(default_factory=PerturbationSpec)
    seed: Optional[int] = Field(default=None, ge=0)
    """
    Что делает: Собственное зерно весов; по умолчанию используется зерно экземпляра.
    """

    def to_mapping(self) -> dict:
        return self.model_dump(exclude_none=True)

    def central_phase_rows(self) -> List[List[Any]]:
        if self.kind != "central" or not self.phases:
            return []
        if isinstance(self.phases[0], (list, tuple)):
            return [list(row) for row in self.phases]
        return [list(self.phases)]


class SubsequenceSpec(BaseModel):
    """
    Описание строго возрастающей подпоследовательности k ⊂ ℕ (0 ∈ ℕ).
    """
    type: Literal["all", "arithmetic", "nosquares", "list", "rate"] = "all"
    """
    Что делает: Вид подпоследовательности: все натуральные, арифметическая
    прогрессия a·j + b, дополнение квадратов, явный список или ⌊j/d⌋-последовательность плотности d.
    """
    a: int = Field(default=1, ge=1)
    b: int = Field(default=0, ge=0)
    values: Optional[List[int]] = None
    """
    Что делает: Элементы явной подпоследовательности.
    Пример: [0, 3, 5, 9]
    """
    density: Optional[float] = None
    """
    Что делает: Плотность для `type: rate`.
    Пример: 0.5
    """

    @model_validator(mode="after")
    def validate_payload(self) -> "SubsequenceSpec":
        if self.type == "list" and not self.values:
            raise ValueError("Подпоследовательность типа 'list' требует непустого поля 'values'")
        if self.type == "rate" and not (self.density is not None and 0 < self.density <= 1):
            raise ValueError(f"Подпоследовательность типа 'rate' требует плотности из (0, 1], получено {self.density}")
        return self

    def to_mapping(self) -> dict:
        return self.model_dump(exclude_none=True)


class ExperimentParams(BaseModel):
    """
    Параметры эксперимента. Каждый тип эксперимента читает только свои поля.
    """
    horizon: int = Field(default=64, ge=1)
    """
    Что делает: Горизонт N, заменяющий sup по всем n.
    Пример: 64
    """
    schedule: List[int] = Field(default_factory=lambda: [64, 256, 1024])
    """
    Что делает: Расписание горизонтов пробы сходимости.
    Форма: Строго возрастающий список целых >= 1.
    """
    eps: List[float] = Field(default_factory=lambda: [0.5])
    """
    Что делает: Сетка ε для поиска проекций; в пробе b.u.e.m. первое значение
    задает бюджет τ(e⊥) < ε.
    Пример: [0.25, 0.5, 1.0]
    """
    eps_relative: bool = False
    """
    Что делает: Умножать ε на ‖x‖₁/τ(1) каждого экземпляра.
    """
    p: float = Field(default=1.0, ge=1)
    delta: float = Field(default=0.1, gt=0)
    """
    Что делает: δ: уровень sup в пробе b.u.e.m. или бюджет τ(e⊥) < δ свидетеля сходимости.
    """
    gamma_grid: List[float] = Field(default_factory=lambda: [1e-2, 1e-4, 1e-6])
    """
    Что делает: Сетка γ пробы b.u.e.m.
    Форма: Строго убывающий список положительных чисел.
    """
    instances: int = Field(default=1, ge=1)
    """
    Что делает: Число экземпляров серии; экземпляр i использует поток (seed, i).
    """
    theorem: Literal["yeadon", "lp", "weighted"] = "yeadon"
    mode: Literal["au", "bau"] = "bau"
    entries: List[Tuple[int, int, int]] = Field(default_factory=lambda: [(0, 0, 0)])
    """
    Что делает: Элементы (блок, строка, столбец) средних, выводимые в CSV траектории.
    Пример: [[0, 0, 1], [1, 0, 0]]
    """
    check_points: List[int] = Field(default_factory=lambda: [4, 16, 64])
    """
    Что делает: Номера n, в которых проверяются тождества переписывания и масштабирования M_n.
    """
    luxemburg_tol: float = Field(default=1e-12, gt=0)
    rewrite_tol: float = Field(default=1e-12, gt=0)
    min_success_rate: float = Field(default=0.95, ge=0, le=1)
    workers: int = Field(default=1, ge=1)
    """
    Что делает: Число потоков для серии экземпляров внутри сценария.
    """
    plots: bool = True

    @field_validator("schedule")
    @classmethod
    def validate_schedule(cls, v: List[int]) -> List[int]:
        if not v or v[0] < 1 or any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError(f"Расписание должно быть строго возрастающим и положительным, получено {v}")
        return v

    @field_validator("gamma_grid")
    @classmethod
    def validate_gamma_grid(cls, v: List[float]) -> List[float]:
        if not v or any(g <= 0 for g in v) or any(b >= a for a, b in zip(v, v[1:])):
            raise ValueError(f"Сетка γ должна быть положительной и строго убывающей, получено {v}")
        return v

    @field_validator("eps")
    @classmethod
    def validate_eps(cls, v: List[float]) -> List[float]:
        if not v or any(e <= 0 for e in v):
            raise ValueError(f"Все значения ε должны быть > 0, получено {v}")
        return v


class Scenario(BaseModel):
    """
    Корневая модель файла сценария.
    """
    spec_version: Literal[1]
    """
    Что делает: Версия схемы сценария.
    Форма: Число 1.
    """
    id: str = Field(pattern=r"^[A-Za-z0-9_.-]+$")
    """
    Что делает: Идентификатор сценария; используется как имя директории результатов.
    Пример: "yeadon_identity"
    """
    description: str = ""
    experiment: ExperimentType
    """
    Что делает: Тип эксперимента.
    Форма: Одна из строк: "average-trace", "maximal-search", "buem-probe",
    "convergence", "norm-table".
    """
    seed: int = Field(default=0, ge=0)
    """
    Что делает: Зерно, полностью определяющее все случайные выборки.
    Переменная окружения ERGOLAB_SEED имеет приоритет.
    """
    algebra: AlgebraSpec
    element: ElementSpec = Field(default_factory=ElementSpec)
    operator: OperatorSpec = Field(default_factory=OperatorSpec)
    left: Optional[WeightSpec] = None
    """
    Что делает: Левые веса {b_j}; отсутствие означает b_j = 1.
    """
    right: Optional[WeightSpec] = None
    """
    Что делает: Правые веса {d_j}; отсутствие означает d_j = 1.
    """
    subsequence: Optional[SubsequenceSpec] = None
    phi: str = "p:2"
    """
    Что делает: Имя функции Орлича.
    Форма: "p:<p>" (Φ(u) = u^p/p) или "expm1".
    Пример: "p:2"
    """
    params: ExperimentParams = Field(default_factory=ExperimentParams)

    @field_validator("phi")
    @classmethod
    def validate_phi(cls, v: str) -> str:
        try:
            orlicz_from_name(v)
        except InvalidArgumentError as e:
            raise ValueError(str(e)) from e
        return v

    @model_validator(mode="after")
    def validate_cross_references(self) -> "Scenario":
        """
        Валидация: все явно заданные матрицы, фазы и перестановки согласованы
        с алгеброй сценария.
        """
        weights = [w for w in (self.left, self.right) if w is not None]
        if self.algebra.random:
            if self.element.is_inline or self.operator.inline_matrices() or self.operator.permutations():
                raise ValueError("Явные матрицы и перестановки не могут ссылаться на случайную алгебру")
            if any(w.central_phase_rows() for w in weights):
                raise ValueError("Центральные фазы не могут ссылаться на случайную алгебру")
            return self

        dims = self.algebra.dims or []
        if self.element.type == "diag":
            diag = self.element.diag or []
            if [len(d) for d in diag] != dims:
                raise ValueError(f"Диагонали элемента имеют длины {[len(d) for d in diag]}, а алгебра {dims}")
        if self.element.type == "blocks":
            _check_blocks(self.element.blocks or [], dims, "Элемент")
        for blocks in self.operator.inline_matrices():
            _check_blocks(blocks, dims, "Оператор")
        for perm in self.operator.permutations():
            if len(perm) != len(dims):
                raise ValueError(f"Перестановка {perm} не соответствует {len(dims)} блокам алгебры")
        for w in weights:
            for row in w.central_phase_rows():
                if len(row) != len(dims):
                    raise ValueError(f"Набор центральных фаз {row} должен содержать {len(dims)} значений")
        return self

    def with_seed(self, seed: int) -> "Scenario":
        return self.model_copy(update={"seed": seed})


OperatorSpec.model_rebuild()
