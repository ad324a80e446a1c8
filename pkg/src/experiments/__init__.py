"""Composite experiments: identification, information bases, de Finetti, crossed arrays."""

from src.experiments.asymptotics import (
    run_finite_modification,
    run_identification,
    run_self_calibration,
)
from src.experiments.crossed import (
    generate_crossed_array,
    resit_cell_frequencies,
    run_crossed_array,
)
from src.experiments.definetti import run_definetti
from src.experiments.information import run_info_base
from src.experiments.models import (
    CrossedArray,
    CrossedArrayRisks,
    CrossedArraySpec,
    DeFinettiResult,
    ExperimentKind,
    ExperimentResult,
    ExperimentSpec,
    FiniteModificationResult,
    IdentificationResult,
    InfoBaseResult,
    ResitMode,
    SelfCalibrationResult,
)
from src.experiments.replicates import resolve_workers, run_replicates
from src.experiments.runner import run_experiment

__all__ = [
    "CrossedArray",
    "CrossedArrayRisks",
    "CrossedArraySpec",
    "DeFinettiResult",
    "ExperimentKind",
    "ExperimentResult",
    "ExperimentSpec",
    "FiniteModificationResult",
    "IdentificationResult",
    "InfoBaseResult",
    "ResitMode",
    "SelfCalibrationResult",
    "generate_crossed_array",
    "resit_cell_frequencies",
    "resolve_workers",
    "run_crossed_array",
    "run_definetti",
    "run_experiment",
    "run_finite_modification",
    "run_identification",
    "run_info_base",
    "run_replicates",
    "run_self_calibration",
]
