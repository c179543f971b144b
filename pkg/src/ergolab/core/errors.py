"""
Иерархия исключений численного ядра.

Каждый класс соответствует одной категории ошибок из описания операций:
invalid-argument, precondition violation, domain error, certification-failure
и search-exhausted.
"""
from typing import Any, Optional


class ErgolabError(Exception):
    """Базовое исключение для всех ошибок ergolab."""
    pass


class InvalidArgumentError(ErgolabError, ValueError):
    """Недопустимый аргумент: неположительная размерность, неунитарный элемент и т.п."""
    pass


class HypothesisViolationError(InvalidArgumentError):
    """
    Нарушена гипотеза теоремы (например, нецентральные веса
    для взвешенной максимальной теоремы).
    """

    def __init__(self, hypothesis: str, message: str):
        super().__init__(f"Нарушена гипотеза '{hypothesis}': {message}")
        self.hypothesis = hypothesis
        """
        Что делает: Короткое имя нарушенной гипотезы, выводится CLI при коде выхода 3.
        Форма: Строка.
        Пример: "central-weights"
        """


class PreconditionError(ErgolabError, ValueError):
    """Нарушено предусловие операции (несамосопряженный вход, f(0) != 0 и т.п.)."""
    pass


class DomainError(ErgolabError, ArithmeticError):
    """Функция не определена в точке спектра."""
    pass


class CertificationError(ErgolabError):
    """
    Численная проверка не прошла: оператор не является DS-оператором
    или тождество для средних нарушено сверх допуска.

    Хранит элемент-свидетель и максимальные дефекты, чтобы ошибку
    можно было воспроизвести.
    """

    def __init__(self, message: str, witness: Any = None, defects: Optional[dict] = None):
        super().__init__(message)
        self.witness = witness
        self.defects = defects or {}


class SearchExhaustedError(ErgolabError):
    """
    Поиск проекции исчерпал бюджет, не найдя валидного сертификата.

    Лучшая найденная попытка передается в `best_attempt` и никогда
    не выдается за валидный результат.
    """

    def __init__(self, message: str, best_attempt: Any = None):
        super().__init__(message)
        self.best_attempt = best_attempt
