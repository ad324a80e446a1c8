"""Finite-sample z test for calibration cells.

A cell with members S has z = sum_S (e_k - p_k) / sqrt(sum_S p_k (1 - p_k)).
Under calibration z is approximately standard normal, so the cell passes when
|z| does not exceed the two-sided normal quantile for the significance level.
"""

import math
from functools import lru_cache

import numpy as np
from scipy.stats import norm

from src.calibration.models import DEFAULT_MIN_COUNT, DEFAULT_SIGNIFICANCE
from src.core.models import CalibrationCell, CellVerdict
from src.exceptions import ValidationError


@lru_cache(maxsize=64)
def normal_quantile(significance: float) -> float:
    """Two-sided standard normal critical value, e.g. 2.5758 for 0.01."""
    if not 0.0 < significance < 1.0:
        raise ValidationError(f"significance must lie in (0, 1), got {significance}")
    return float(norm.ppf(1.0 - significance / 2.0))


def calibration_z_test(
    cell: CalibrationCell,
    significance: float = DEFAULT_SIGNIFICANCE,
    min_count: int = DEFAULT_MIN_COUNT,
) -> CellVerdict:
    """
    Decide a cell's verdict.

    Args:
        cell: Cell with raw sums
        significance: Two-sided test level
        min_count: Fewer members than this gives INSUFFICIENT

    Returns:
        EMPTY for no members, INSUFFICIENT below min_count, otherwise PASS/FAIL.
        Cells whose forecasts are all 0 or 1 have no z and pass iff the
        discrepancy is exactly zero.
    """
    if cell.count == 0:
        return CellVerdict.EMPTY
    if cell.count < min_count:
        return CellVerdict.INSUFFICIENT
    z = cell.z
    if z is None:
        return CellVerdict.PASS if cell.sum_outcome == cell.sum_forecast else CellVerdict.FAIL
    return CellVerdict.PASS if abs(z) <= normal_quantile(significance) else CellVerdict.FAIL


def build_cell(
    cell_id: str,
    outcomes: np.ndarray,
    forecasts: np.ndarray,
    significance: float = DEFAULT_SIGNIFICANCE,
    min_count: int = DEFAULT_MIN_COUNT,
) -> CalibrationCell:
    """Sum the member steps of one cell and attach its verdict."""
    p = forecasts.tolist()
    sums = {
        "count": len(p),
        "sum_forecast": math.fsum(p),
        "sum_outcome": float(np.sum(outcomes, dtype=np.int64)),
        "sum_variance": math.fsum((forecasts * (1.0 - forecasts)).tolist()),
    }
    provisional = CalibrationCell(cell_id=cell_id, verdict=CellVerdict.EMPTY, **sums)
    return CalibrationCell(
        cell_id=cell_id,
        verdict=calibration_z_test(provisional, significance, min_count),
        **sums,
    )
