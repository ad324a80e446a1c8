"""Shared fixtures for workbench tests."""

import pytest

from src.core.models import ForecastSeries, OutcomeSequence, ValidatedRun
from src.core.validation import align_run
from src.forecasters.models import ForecasterSpec
from src.processes.models import PriorSpec, ProcessKind, ProcessSpec
from src.tracing import reset_tracer_provider

ALTERNATING_N = 10_000


def pytest_collection_modifyitems(items):
    for item in items:
        if "unit" in item.path.parts:
            item.add_marker(pytest.mark.unit)


@pytest.fixture(autouse=True)
def _fresh_tracer_provider(monkeypatch):
    """Every test starts with spans recorded but not exported."""
    monkeypatch.setenv("OTEL_EXPORTER_TYPE", "none")
    reset_tracer_provider()
    yield
    reset_tracer_provider()


@pytest.fixture
def alternating_process() -> ProcessSpec:
    """Alternating weather 1, 0, 1, 0, ..."""
    return ProcessSpec(kind=ProcessKind.DETERMINISTIC, pattern=[1, 0], n=ALTERNATING_N)


@pytest.fixture
def alternating_outcomes() -> OutcomeSequence:
    return OutcomeSequence(
        outcomes=[1, 0] * (ALTERNATING_N // 2), process_id="deterministic(10)", seed=0
    )


@pytest.fixture
def alternating_constant_run(alternating_outcomes) -> ValidatedRun:
    """constant(0.5) forecasts against alternating weather."""
    forecasts = ForecastSeries(forecasts=[0.5] * ALTERNATING_N, forecaster_id="constant(0.5)")
    return align_run(alternating_outcomes, forecasts)


@pytest.fixture
def two_level_process() -> ProcessSpec:
    """Deep rates 0.2 and 0.6 with equal weight behind a shared coarse risk of 0.4."""
    return ProcessSpec(
        kind=ProcessKind.TWO_LEVEL,
        deep_rates=[0.2, 0.6],
        weights=[1.0, 1.0],
        coarse_value=0.4,
        n=100_000,
        seed=5,
    )


@pytest.fixture
def category_rates() -> list[float]:
    return [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]


@pytest.fixture
def h_based_forecasters(category_rates) -> list[ForecasterSpec]:
    """One instance of every built-in H-based forecaster kind."""
    return [
        ForecasterSpec.constant(0.5),
        ForecasterSpec.constant(0.3),
        ForecasterSpec.climatology(0.0),
        ForecasterSpec.climatology(4.0),
        ForecasterSpec.laplace(),
        ForecasterSpec.polya_predictive(2, 3),
        ForecasterSpec.category(category_rates),
        ForecasterSpec.bayes_mixture(PriorSpec.uniform()),
        ForecasterSpec.bayes_mixture(PriorSpec.beta(2.0, 5.0)),
        ForecasterSpec.transition_laplace(),
        ForecasterSpec.covariate_rate("u"),
    ]
