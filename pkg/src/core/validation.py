"""Alignment and validation of forecast/outcome runs."""

from collections.abc import Sequence

from src.core.models import ForecastSeries, OutcomeSequence, ValidatedRun
from src.exceptions import EmptyRunError, LengthMismatchError


def align_run(
    outcomes: OutcomeSequence | Sequence[int],
    forecasts: ForecastSeries | Sequence[float],
) -> ValidatedRun:
    """
    Pair an outcome sequence with the forecasts issued for it.

    Raw sequences are accepted and validated on the way in.

    Args:
        outcomes: Outcome sequence, or raw 0/1 values
        forecasts: Forecast series, or raw probabilities

    Returns:
        ValidatedRun with matching lengths

    Raises:
        EmptyRunError: If either side is empty
        NonBinaryOutcomeError: If an outcome is not 0 or 1
        ForecastRangeError: If a forecast lies outside [0, 1]
        LengthMismatchError: If the lengths differ
    """
    if not isinstance(outcomes, OutcomeSequence):
        outcomes = OutcomeSequence(outcomes=outcomes)
    if not isinstance(forecasts, ForecastSeries):
        forecasts = ForecastSeries(forecasts=forecasts)

    if outcomes.n == 0:
        raise EmptyRunError("outcome sequence")
    if forecasts.n == 0:
        raise EmptyRunError("forecast series")
    if outcomes.n != forecasts.n:
        raise LengthMismatchError(outcomes.n, forecasts.n)

    return ValidatedRun(outcomes=outcomes, forecasts=forecasts)
