"""
Определение типов экспериментов и форматов результатов.
"""
import enum


class ExperimentType(enum.Enum):
    """
    Контракт, определяющий все возможные типы экспериментов.

    Этот Enum — единственный источник правды о том, какие значения может
    принимать поле `experiment` в файлах сценариев.
    """

    """
    Траектория средних A_n (или A_n^k): нормы Люксембурга, шаги
    ‖A_n − A_{n−1}‖_∞, выбранные элементы матриц и проверки тождеств
    переписывания и масштабирования M_n.
    """
    AVERAGE_TRACE = "average-trace"

    """
    Поиск проекций максимальных неравенств (Йедон, L^p-лемма, взвешенная
    теорема) по серии экземпляров с сертификатами в JSON.
    """
    MAXIMAL_SEARCH = "maximal-search"

    """
    Эмпирическая проверка равностепенной непрерывности в нуле по сетке γ.
    """
    BUEM_PROBE = "buem-probe"

    """
    Кривая оконных разрывов Коши вдоль расписания горизонтов.
    """
    CONVERGENCE = "convergence"

    """
    Таблица p-норм, нормы Люксембурга, модуляра и сингулярных чисел элемента.
    """
    NORM_TABLE = "norm-table"


class OutputFormat(enum.Enum):
    """
    Форматы файлов результатов. Каждому формату соответствует свой writer.
    """
    CSV = "csv"
    JSON = "json"
    SVG = "svg"
