"""Sequential forecasting engine.

forecast_next maps one information record (plus explicit state) to p_k.
run_forecaster drives a forecaster over a whole information base, either
through closed forms over cumulative counts (default) or step by step through
forecast_next with periodic checkpoints. Both paths evaluate the same
expressions, so they agree bit for bit.
"""

import logging

import numpy as np

from src.core.models import (
    ForecastSeries,
    InformationBase,
    InformationRecord,
    OutcomeSequence,
    Scenario,
)
from src.exceptions import (
    CheckpointRecoveryError,
    EmptyRunError,
    ForecasterStateError,
    InvalidForecasterSpecError,
    ValidationError,
)
from src.forecasters.checkpoint import CheckpointStore
from src.forecasters.models import ForecasterKind, ForecasterSpec, ForecasterState

logger = logging.getLogger(__name__)

NEUTRAL_FORECAST = 0.5
DEFAULT_CHECKPOINT_EVERY = 1000


def _beta_predictive(successes, trials, a, b):  # type: ignore[no-untyped-def]
    """(s + a) / (t + a + b); shared by scalar and array paths."""
    return (successes + a) / (trials + a + b)


# =============================================================================
# Single step
# =============================================================================


def forecast_next(
    spec: ForecasterSpec,
    record: InformationRecord,
    state: ForecasterState | None = None,
    outcome: int | None = None,
) -> tuple[float, ForecasterState]:
    """
    Issue the forecast for step record.step.

    Args:
        spec: Forecaster configuration
        record: Information record H_k
        state: Counts absorbed so far; must cover the record's history or lag it by one
        outcome: e_k, read only by the oracle

    Returns:
        Tuple of (p_k, state covering e_1..e_{k-1})

    Raises:
        ForecasterStateError: If the state does not match the record's history
        InvalidForecasterSpecError: If a required covariate or outcome is missing
    """
    state = _synchronise(state or ForecasterState(), record)
    kind = spec.kind

    if kind == ForecasterKind.CONSTANT:
        assert spec.c is not None
        p = float(spec.c)
    elif kind == ForecasterKind.ORACLE:
        if outcome is None:
            raise InvalidForecasterSpecError(kind.value, "the oracle needs the outcome e_k")
        p = float(outcome)
    elif kind in (ForecasterKind.CATEGORY, ForecasterKind.COVARIATE_RATE):
        p = _covariate_forecast(spec, record)
    elif kind == ForecasterKind.TRANSITION_LAPLACE:
        if state.last_outcome is None:
            p = NEUTRAL_FORECAST
        else:
            row = state.transitions[state.last_outcome]
            p = _beta_predictive(row[1], row[0] + row[1], 1, 1)
    else:
        a, b = spec.beta_counts  # type: ignore[misc]
        if state.trials + a + b == 0:
            p = NEUTRAL_FORECAST
        else:
            p = _beta_predictive(state.successes, state.trials, a, b)
    return float(p), state


def _synchronise(state: ForecasterState, record: InformationRecord) -> ForecasterState:
    expected = len(record.outcome_history)
    if state.trials == expected:
        return state
    if state.trials == expected - 1:
        last = record.last_outcome
        assert last is not None
        return state.absorb(last)
    raise ForecasterStateError(step=record.step, trials=state.trials)


def _covariate_forecast(spec: ForecasterSpec, record: InformationRecord) -> float:
    name = spec.covariate_name
    assert name is not None
    if name not in record.covariates:
        raise InvalidForecasterSpecError(
            spec.kind.value, f"covariate '{name}' is missing from the record for step {record.step}"
        )
    value = record.covariates[name]
    if spec.kind == ForecasterKind.COVARIATE_RATE:
        return float(value)
    assert spec.rate_table is not None
    index = int(value)
    if index != value or not 1 <= index <= len(spec.rate_table):
        raise InvalidForecasterSpecError(
            spec.kind.value,
            f"category {value!r} at step {record.step} is not in 1..{len(spec.rate_table)}",
        )
    return float(spec.rate_table[index - 1])


# =============================================================================
# Whole runs
# =============================================================================


def run_forecaster(
    spec: ForecasterSpec,
    outcomes: OutcomeSequence,
    info: InformationBase | None = None,
    store: CheckpointStore | None = None,
    checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY,
    resume: bool = False,
) -> ForecastSeries:
    """
    Run a forecaster over every step of an outcome sequence.

    Args:
        spec: Forecaster configuration
        outcomes: Outcome sequence e_1..e_N
        info: Information base derived from outcomes (default: sequential, no covariates)
        store: When given, run step by step and save a checkpoint every checkpoint_every steps
        checkpoint_every: Steps between checkpoints
        resume: Continue from the latest checkpoint in store

    Returns:
        ForecastSeries with h_based copied from the ForecasterSpec

    Raises:
        EmptyRunError: If there are no outcomes
        ValidationError: If info was not derived from outcomes
        ForecasterStateError: Propagated from forecast_next
    """
    if outcomes.n == 0:
        raise EmptyRunError("outcome sequence")
    if info is None:
        info = InformationBase.sequential(outcomes.outcomes)
    elif info.outcomes != outcomes.outcomes:
        raise ValidationError(
            "Information base was not derived from the outcome sequence",
            details={"outcomes": outcomes.n, "info": info.n},
        )

    if store is None:
        forecasts = _closed_form(spec, info)
    else:
        forecasts = _sequential(spec, info, store, checkpoint_every, resume)

    logger.debug(f"Ran {spec.forecaster_id} over {outcomes.process_id}: n={outcomes.n}")
    return ForecastSeries(
        forecasts=forecasts, forecaster_id=spec.forecaster_id, h_based=spec.h_based
    )


def _closed_form(spec: ForecasterSpec, info: InformationBase) -> np.ndarray:
    """Forecasts for every step at once from cumulative counts of past outcomes."""
    e = info.outcome_array
    n = info.n
    kind = spec.kind

    if kind == ForecasterKind.CONSTANT:
        assert spec.c is not None
        return np.full(n, float(spec.c))
    if kind == ForecasterKind.ORACLE:
        return e.astype(np.float64)
    if kind in (ForecasterKind.CATEGORY, ForecasterKind.COVARIATE_RATE):
        return _closed_form_covariate(spec, info)
    if kind == ForecasterKind.TRANSITION_LAPLACE:
        return _closed_form_transition(e, info.scenario)

    if info.scenario == Scenario.INDEPENDENCE:
        # No outcome history reaches any record.
        successes = np.zeros(n, dtype=np.int64)
        trials = np.zeros(n, dtype=np.int64)
    else:
        successes = np.concatenate(([0], np.cumsum(e)[:-1]))
        trials = np.arange(n, dtype=np.int64)

    a, b = spec.beta_counts  # type: ignore[misc]
    if a + b == 0:
        with np.errstate(invalid="ignore", divide="ignore"):
            p = _beta_predictive(successes, trials, a, b)
        return np.where(trials == 0, NEUTRAL_FORECAST, p)
    return _beta_predictive(successes, trials, a, b).astype(np.float64)


def _closed_form_covariate(spec: ForecasterSpec, info: InformationBase) -> np.ndarray:
    name = spec.covariate_name
    assert name is not None
    if name not in info.covariates:
        raise InvalidForecasterSpecError(
            spec.kind.value, f"covariate '{name}' is not in the information base"
        )
    values = info.covariate_array(name)
    if spec.kind == ForecasterKind.COVARIATE_RATE:
        return values.astype(np.float64)
    assert spec.rate_table is not None
    table = np.asarray(spec.rate_table, dtype=np.float64)
    valid = (values == np.round(values)) & (values >= 1) & (values <= table.shape[0])
    if not valid.all():
        step = int(np.argmin(valid)) + 1
        raise InvalidForecasterSpecError(
            spec.kind.value,
            f"category {values[step - 1]!r} at step {step} is not in 1..{table.shape[0]}",
        )
    return table[values.astype(np.int64) - 1]


def _closed_form_transition(e: np.ndarray, scenario: Scenario) -> np.ndarray:
    n = e.shape[0]
    p = np.full(n, NEUTRAL_FORECAST)
    if scenario == Scenario.INDEPENDENCE or n < 2:
        return p
    # pair j (0-based) is (e[j], e[j+1]); before index i the pairs 0..i-2 are known
    prev, nxt = e[:-1], e[1:]
    from_one = np.concatenate(([0], np.cumsum(prev == 1)))
    one_one = np.concatenate(([0], np.cumsum((prev == 1) & (nxt == 1))))
    from_zero = np.concatenate(([0], np.cumsum(prev == 0)))
    zero_one = np.concatenate(([0], np.cumsum((prev == 0) & (nxt == 1))))

    known = np.arange(n - 1)  # pairs known before index i = 1..n-1
    last = e[:-1]
    successes = np.where(last == 1, one_one[known], zero_one[known])
    trials = np.where(last == 1, from_one[known], from_zero[known])
    p[1:] = _beta_predictive(successes, trials, 1, 1)
    return p


def _sequential(
    spec: ForecasterSpec,
    info: InformationBase,
    store: CheckpointStore,
    checkpoint_every: int,
    resume: bool,
) -> list[float]:
    if checkpoint_every < 1:
        raise ValidationError(f"checkpoint_every must be >= 1, got {checkpoint_every}")

    state = ForecasterState()
    forecasts: list[float] = []
    if resume:
        checkpoint = store.latest()
        if checkpoint is not None:
            if checkpoint.forecaster != spec:
                raise CheckpointRecoveryError(
                    checkpoint.checkpoint_id,
                    f"checkpoint was taken for {checkpoint.forecaster.forecaster_id}, "
                    f"not {spec.forecaster_id}",
                )
            if checkpoint.step > info.n:
                raise CheckpointRecoveryError(
                    checkpoint.checkpoint_id, "checkpoint is past the end of the run"
                )
            state, forecasts = checkpoint.to_state()
            logger.info(f"Resuming {spec.forecaster_id} at step {checkpoint.step + 1}")

    outcomes = info.outcome_array
    for step in range(len(forecasts) + 1, info.n + 1):
        p, state = forecast_next(spec, info.record(step), state, outcome=int(outcomes[step - 1]))
        forecasts.append(p)
        if step % checkpoint_every == 0:
            store.save_checkpoint(spec, state, forecasts)
    return forecasts
