"""Wilson score intervals and the single-trial critique exhibit."""

import math
from functools import lru_cache

from scipy.stats import norm

from src.exceptions import ValidationError
from src.intervals.models import IntervalResult, PointMass, SingleTrialReport

# Conventional two-sided 95% value; reproduces the published group and individual margins.
Z_95 = 1.96
EXAMPLE_P_HAT = 0.75
EXAMPLE_SIZES = (10_000, 1_000, 100, 1)


@lru_cache(maxsize=32)
def normal_critical_value(confidence: float) -> float:
    """Two-sided standard normal quantile; exactly 1.96 for 95%."""
    if confidence == 0.95:
        return Z_95
    return float(norm.ppf(0.5 + confidence / 2.0))


def wilson_interval(p_hat: float, n: int, confidence: float = 0.95) -> IntervalResult:
    """
    Wilson score interval for a proportion p_hat observed in n trials.

    center = (p + z^2/2n) / (1 + z^2/n)
    half   = z * sqrt(p(1-p)/n + z^2/4n^2) / (1 + z^2/n)

    Raises:
        ValidationError: If n < 1, p_hat is outside [0, 1] or confidence outside (0, 1)
    """
    if n < 1:
        raise ValidationError(f"Wilson interval needs n >= 1 trials, got {n}", details={"n": n})
    if not (math.isfinite(p_hat) and 0.0 <= p_hat <= 1.0):
        raise ValidationError(f"p_hat must lie in [0, 1], got {p_hat}", details={"p_hat": p_hat})
    if not 0.0 < confidence < 1.0:
        raise ValidationError(f"confidence must lie in (0, 1), got {confidence}")

    z = normal_critical_value(confidence)
    z2 = z * z
    denominator = 1.0 + z2 / n
    center = (p_hat + z2 / (2.0 * n)) / denominator
    half_width = z * math.sqrt(p_hat * (1.0 - p_hat) / n + z2 / (4.0 * n * n)) / denominator
    return IntervalResult(
        p_hat=p_hat,
        n=n,
        confidence=confidence,
        lower=max(0.0, center - half_width),
        upper=min(1.0, center + half_width),
        z=z,
    )


def single_trial_demo(p: float, confidence: float = 0.95) -> SingleTrialReport:
    """
    Exact distribution of one trial's success rate, beside the Wilson interval for n=1.

    A single individual's success rate can only be 0 or 1, so an interval
    around p says nothing about it.
    """
    if not (math.isfinite(p) and 0.0 <= p <= 1.0):
        raise ValidationError(f"p must lie in [0, 1], got {p}")
    wilson = wilson_interval(p, 1, confidence)
    lower, upper = wilson.rounded()
    return SingleTrialReport(
        p=p,
        distribution=[PointMass(value=0.0, mass=1.0 - p), PointMass(value=1.0, mass=p)],
        wilson=wilson,
        note=(
            f"success rate is 0 with probability {1.0 - p:g} and 1 with probability {p:g}; "
            f"the n=1 Wilson interval ({lower:.2f}, {upper:.2f}) contains neither outcome"
            if lower > 0.0 and upper < 1.0
            else f"success rate is 0 with probability {1.0 - p:g} and 1 with probability {p:g}"
        ),
    )


def example_two_table(confidence: float = 0.95) -> list[IntervalResult]:
    """Intervals for p_hat=0.75 at n = 10000, 1000, 100 and 1."""
    return [wilson_interval(EXAMPLE_P_HAT, n, confidence) for n in EXAMPLE_SIZES]
