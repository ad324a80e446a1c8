"""Unit tests for custom exception classes."""

import pytest

from src.exceptions import (
    ArtifactVersionError,
    ArtifactWriteError,
    CheckpointRecoveryError,
    CriterionMismatchError,
    EmptyRunError,
    ForecastRangeError,
    ForecasterStateError,
    LengthMismatchError,
    LookaheadRuleError,
    NonBinaryOutcomeError,
    NotHBasedError,
    OracleNotAllowedError,
    ReplayMismatchError,
    ValidationError,
    WorkbenchError,
    WorkbenchRuntimeError,
)

pytestmark = pytest.mark.unit


class TestWorkbenchError:
    """Tests for the base WorkbenchError."""

    def test_base_error_creation(self):
        """Test base error can be instantiated."""
        error = WorkbenchError("Base error message")
        assert str(error) == "Base error message"

    def test_base_error_inheritance(self):
        """Test WorkbenchError inherits from Exception but not ValueError."""
        assert issubclass(WorkbenchError, Exception)
        assert not issubclass(WorkbenchError, ValueError)


class TestValidationError:
    """Tests for ValidationError."""

    def test_error_with_message_only(self):
        """Test error with just a message."""
        error = ValidationError("Invalid input")
        assert str(error) == "Invalid input"
        assert error.details == {}

    def test_error_with_details(self):
        """Test error with details dict."""
        error = ValidationError("Validation failed", details={"field": "n"})
        assert error.details["field"] == "n"

    @pytest.mark.parametrize(
        "error_class",
        [
            EmptyRunError,
            LengthMismatchError,
            ForecastRangeError,
            NonBinaryOutcomeError,
            ForecasterStateError,
            CriterionMismatchError,
            NotHBasedError,
            OracleNotAllowedError,
            LookaheadRuleError,
        ],
    )
    def test_subclasses_are_validation_errors(self, error_class):
        """Test every input error maps to the validation channel."""
        assert issubclass(error_class, ValidationError)


class TestRunErrors:
    """Tests for run-shape errors."""

    def test_length_mismatch_reports_both_lengths(self):
        """Test LengthMismatchError carries both lengths."""
        error = LengthMismatchError(10, 9)
        assert error.outcomes_length == 10
        assert error.forecasts_length == 9
        assert "10" in str(error) and "9" in str(error)

    def test_forecast_range_names_step(self):
        """Test ForecastRangeError names the offending step and value."""
        error = ForecastRangeError(step=3, value=1.5)
        assert error.step == 3
        assert "step 3" in str(error)
        assert "1.5" in str(error)

    def test_non_binary_outcome_names_step(self):
        """Test NonBinaryOutcomeError names the offending step."""
        error = NonBinaryOutcomeError(step=2, value=2)
        assert error.details == {"step": 2, "value": "2"}

    def test_state_error_attributes(self):
        """Test ForecasterStateError carries step and trials."""
        error = ForecasterStateError(step=5, trials=1)
        assert (error.step, error.trials) == (5, 1)


class TestOracleNotAllowedError:
    """Tests for OracleNotAllowedError."""

    def test_is_not_h_based_error(self):
        """Test the oracle error is a NotHBasedError for the oracle."""
        error = OracleNotAllowedError("adversarial_outcomes")
        assert isinstance(error, NotHBasedError)
        assert error.forecaster_id == "oracle"
        assert error.operation == "adversarial_outcomes"


class TestRuntimeErrors:
    """Tests for WorkbenchRuntimeError subclasses."""

    @pytest.mark.parametrize(
        "error",
        [
            ReplayMismatchError("run.json", "outcomes", 4),
            ArtifactVersionError("run.json", "0", "1"),
            CheckpointRecoveryError("cp-1", "checkpoint not found"),
            ArtifactWriteError("/nope/run.json", "Permission denied"),
        ],
    )
    def test_runtime_errors_are_not_validation_errors(self, error):
        """Test runtime errors stay out of the validation channel."""
        assert isinstance(error, WorkbenchRuntimeError)
        assert not isinstance(error, ValidationError)

    def test_replay_mismatch_message(self):
        """Test ReplayMismatchError names the field and first differing step."""
        error = ReplayMismatchError("run.json", "forecasts", 17)
        assert error.artifact == "run.json"
        assert error.field == "forecasts"
        assert "step 17" in str(error)

    def test_version_error_message(self):
        """Test ArtifactVersionError reports found and expected versions."""
        error = ArtifactVersionError("run.json", None, "1")
        assert error.found is None
        assert "'1'" in str(error)
