"""
Модели данных для ergolab.

Этот модуль экспортирует все основные модели для удобства импорта.
"""

# Scenario models
from .scenario import (
    AlgebraSpec,
    ElementSpec,
    ExperimentParams,
    OperatorSpec,
    PerturbationSpec,
    Scenario,
    SubsequenceSpec,
    WeightSpec,
)

# Context model
from .context import ExperimentContext

# Result models
from .results import (
    ExperimentResult,
    Manifest,
    PlotSeries,
    PlotSpec,
    ResultTable,
    SuiteRow,
    SuiteSummary,
)

# Enums
from .experiment import ExperimentType, OutputFormat

__all__ = [
    # Scenario
    "AlgebraSpec",
    "ElementSpec",
    "ExperimentParams",
    "OperatorSpec",
    "PerturbationSpec",
    "Scenario",
    "SubsequenceSpec",
    "WeightSpec",
    # Context
    "ExperimentContext",
    # Results
    "ExperimentResult",
    "Manifest",
    "PlotSeries",
    "PlotSpec",
    "ResultTable",
    "SuiteRow",
    "SuiteSummary",
    # Enums
    "ExperimentType",
    "OutputFormat",
]
