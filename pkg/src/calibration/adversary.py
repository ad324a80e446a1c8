"""Adversarial outcome generation against an H-based forecaster.

The adversary sees each forecast before choosing the outcome: e_k = 1 when
p_k <= 0.5, otherwise e_k = 0. On whichever of {p_k <= 0.5} and {p_k > 0.5}
holds at least half the steps, the outcome frequency and mean forecast then
differ by at least 0.5, so no H-based forecaster is calibrated on every H-based
subset.
"""

import logging

import numpy as np

from src.calibration.criteria import h_calibration, threshold_rules
from src.calibration.models import DEFAULT_MIN_COUNT, DEFAULT_SIGNIFICANCE
from src.core.models import (
    CalibrationReport,
    ForecastSeries,
    InformationBase,
    InformationRecord,
    OutcomeSequence,
    Scenario,
)
from src.core.rules import SelectionRule
from src.core.validation import align_run
from src.exceptions import EmptyRunError, OracleNotAllowedError
from src.forecasters.engine import forecast_next
from src.forecasters.models import ForecasterKind, ForecasterSpec, ForecasterState
from src.processes.models import CATEGORY_COUNT
from src.processes.rng import make_rng

logger = logging.getLogger(__name__)

ADVERSARY_THRESHOLD = 0.5


def adversary_covariates(
    forecaster: ForecasterSpec, n: int, seed: int = 0
) -> dict[str, list[float]]:
    """Covariate stream for forecasters that read one, drawn independently of outcomes."""
    name = forecaster.covariate_name
    if name is None:
        return {}
    rng = make_rng(seed, "adversary", name)
    if forecaster.kind == ForecasterKind.CATEGORY:
        values = rng.integers(1, CATEGORY_COUNT, size=n, endpoint=True).astype(np.float64)
    else:
        values = rng.random(n)
    return {name: values.tolist()}


def adversarial_outcomes(
    forecaster: ForecasterSpec,
    n: int,
    seed: int = 0,
) -> tuple[OutcomeSequence, ForecastSeries]:
    """
    Build the outcome sequence that defeats a forecaster.

    Args:
        forecaster: Any H-based forecaster
        n: Number of steps
        seed: Seed for covariate streams (category / covariate_rate forecasters)

    Returns:
        Tuple of (adversarial outcomes, the forecasts issued against them)

    Raises:
        OracleNotAllowedError: If the forecaster reads the outcome itself
        EmptyRunError: If n < 1
    """
    if forecaster.kind == ForecasterKind.ORACLE:
        raise OracleNotAllowedError("adversarial_outcomes")
    if n < 1:
        raise EmptyRunError("adversarial run")

    streams = adversary_covariates(forecaster, n, seed)
    covariates = {name: np.asarray(v) for name, v in streams.items()}
    outcomes = np.zeros(n, dtype=np.int64)
    forecasts: list[float] = []
    state = ForecasterState()

    for step in range(1, n + 1):
        # valid by construction: history is exactly e_1..e_{k-1}
        record = InformationRecord.model_construct(
            step=step,
            outcome_history=outcomes[: step - 1],
            covariates={name: float(arr[step - 1]) for name, arr in covariates.items()},
            scenario=Scenario.SEQUENTIAL,
        )
        p, state = forecast_next(forecaster, record, state)
        forecasts.append(p)
        outcomes[step - 1] = 1 if p <= ADVERSARY_THRESHOLD else 0

    process_id = f"adversary({forecaster.forecaster_id})"
    logger.info(f"Adversary against {forecaster.forecaster_id}: n={n}, ones={int(outcomes.sum())}")
    return (
        OutcomeSequence(outcomes=outcomes, process_id=process_id, seed=seed),
        ForecastSeries(forecasts=forecasts, forecaster_id=forecaster.forecaster_id, h_based=True),
    )


def majority_threshold_rule(
    forecasts: ForecastSeries | np.ndarray,
    threshold: float = ADVERSARY_THRESHOLD,
) -> SelectionRule:
    """{p_k <= threshold} if it holds at least half the steps, else its complement."""
    p = forecasts.array if isinstance(forecasts, ForecastSeries) else np.asarray(forecasts)
    at_most, above = threshold_rules(threshold)
    return at_most if 2 * int(np.count_nonzero(p <= threshold)) >= p.shape[0] else above


def adversary_report(
    forecaster: ForecasterSpec,
    n: int,
    seed: int = 0,
    significance: float = DEFAULT_SIGNIFICANCE,
    min_count: int = DEFAULT_MIN_COUNT,
) -> CalibrationReport:
    """Run the adversary and evaluate H-calibration on the majority threshold rule."""
    outcomes, forecasts = adversarial_outcomes(forecaster, n, seed)
    run = align_run(outcomes, forecasts)
    info = InformationBase.sequential(
        outcomes.outcomes, covariates=adversary_covariates(forecaster, n, seed)
    )
    return h_calibration(run, info, [majority_threshold_rule(forecasts)], significance, min_count)
