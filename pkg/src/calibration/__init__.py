"""Calibration criteria, z tests, scoring and the adversary."""

from src.calibration.adversary import (
    adversarial_outcomes,
    adversary_covariates,
    adversary_report,
    majority_threshold_rule,
)
from src.calibration.criteria import (
    default_rule_family,
    h_calibration,
    overall_calibration,
    probability_calibration,
    subset_calibration,
    threshold_rules,
)
from src.calibration.models import BinSpec, BrierDecomposition
from src.calibration.scoring import brier_decomposition
from src.calibration.ztest import build_cell, calibration_z_test, normal_quantile

__all__ = [
    "BinSpec",
    "BrierDecomposition",
    "adversarial_outcomes",
    "adversary_covariates",
    "adversary_report",
    "brier_decomposition",
    "build_cell",
    "calibration_z_test",
    "default_rule_family",
    "h_calibration",
    "majority_threshold_rule",
    "normal_quantile",
    "overall_calibration",
    "probability_calibration",
    "subset_calibration",
    "threshold_rules",
]
