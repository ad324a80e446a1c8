"""Wilson score intervals."""

from src.intervals.models import IntervalResult, PointMass, SingleTrialReport, round_half_away
from src.intervals.wilson import (
    example_two_table,
    normal_critical_value,
    single_trial_demo,
    wilson_interval,
)

__all__ = [
    "IntervalResult",
    "PointMass",
    "SingleTrialReport",
    "example_two_table",
    "normal_critical_value",
    "round_half_away",
    "single_trial_demo",
    "wilson_interval",
]
