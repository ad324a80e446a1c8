"""Unit tests for run serialization."""

import json

import pytest

from src.core.models import ForecastSeries, InformationBase, OutcomeSequence
from src.core.rules import SelectionRule, WindowClause
from src.core.serialization import (
    run_from_csv,
    run_from_json,
    run_to_csv,
    run_to_dict,
    run_to_frame,
    run_to_json,
)
from src.core.validation import align_run
from src.exceptions import LengthMismatchError


@pytest.fixture
def small_run():
    return align_run(
        OutcomeSequence(outcomes=[1, 0, 1], process_id="bernoulli(0.3)", seed=11),
        ForecastSeries(forecasts=[0.1, 1 / 3, 0.7], forecaster_id="laplace"),
    )


class TestRunJson:
    """Tests for JSON serialization."""

    def test_dict_fields(self, small_run):
        """Test the serialized object carries provenance and both series."""
        data = run_to_dict(small_run)

        assert set(data) == {"process", "seed", "outcomes", "forecaster", "forecasts", "h_based"}
        assert data["seed"] == 11
        assert data["h_based"] is True

    def test_json_restores_bit_exact_forecasts(self, small_run):
        """Test forecasts such as 1/3 come back bit for bit."""
        restored = run_from_json(run_to_json(small_run))

        assert restored.forecasts.forecasts == small_run.forecasts.forecasts
        assert restored.outcomes.process_id == "bernoulli(0.3)"

    def test_json_keys_sorted(self, small_run):
        """Test keys are emitted in sorted order for stable diffs."""
        keys = list(json.loads(run_to_json(small_run)))

        assert keys == sorted(keys)

    def test_from_json_checks_lengths(self):
        """Test a stored run with unequal lengths is rejected."""
        text = json.dumps({"outcomes": [1, 0], "forecasts": [0.5]})

        with pytest.raises(LengthMismatchError):
            run_from_json(text)


class TestRunCsv:
    """Tests for per-step CSV export."""

    def test_frame_columns(self, small_run):
        """Test the per-step table has step, e, p and rule memberships."""
        frame = run_to_frame(small_run)

        assert list(frame.columns) == ["step", "e", "p", "rule_memberships"]
        assert frame["step"].tolist() == [1, 2, 3]
        assert frame["rule_memberships"].tolist() == ["", "", ""]

    def test_rule_memberships(self, small_run):
        """Test memberships list every selecting rule id separated by ';'."""
        rules = [
            SelectionRule.every_mth(2, 1, rule_id="odd"),
            SelectionRule.history("after-rain", window=WindowClause(pattern=[1])),
        ]
        frame = run_to_frame(small_run, InformationBase.sequential(small_run.e), rules)

        assert frame["rule_memberships"].tolist() == ["odd", "after-rain", "odd"]

    def test_csv_round_trip_values(self, small_run):
        """Test reading the CSV back gives the same outcomes and forecasts."""
        restored = run_from_csv(run_to_csv(small_run))

        assert restored.e.tolist() == [1, 0, 1]
        assert restored.forecasts.forecasts == small_run.forecasts.forecasts

    def test_csv_uses_unix_newlines(self, small_run):
        """Test lines end with a bare newline."""
        text = run_to_csv(small_run)

        assert "\r" not in text
        assert text.splitlines()[0] == "step,e,p,rule_memberships"
