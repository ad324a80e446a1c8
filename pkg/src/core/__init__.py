"""Core domain types: runs, information records, selection rules and reports."""

from src.core.models import (
    CalibrationCell,
    CalibrationReport,
    CellVerdict,
    Criterion,
    ForecastSeries,
    InformationBase,
    InformationRecord,
    OutcomeSequence,
    Scenario,
    ValidatedRun,
)
from src.core.rules import (
    CovariateClause,
    ForecastClause,
    HistoryPredicate,
    RuleKind,
    SelectionRule,
    StepModuloClause,
    WindowClause,
)
from src.core.validation import align_run

__all__ = [
    "CalibrationCell",
    "CalibrationReport",
    "CellVerdict",
    "CovariateClause",
    "Criterion",
    "ForecastClause",
    "ForecastSeries",
    "HistoryPredicate",
    "InformationBase",
    "InformationRecord",
    "OutcomeSequence",
    "RuleKind",
    "Scenario",
    "SelectionRule",
    "StepModuloClause",
    "ValidatedRun",
    "WindowClause",
    "align_run",
]
