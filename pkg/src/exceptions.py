"""Custom exception classes for the calibration workbench."""


class WorkbenchError(Exception):
    """Base exception for all workbench errors."""


class ValidationError(WorkbenchError):
    """Raised when inputs, specs or runs fail validation."""

    def __init__(self, message: str, details: dict | None = None):
        self.details = details or {}
        super().__init__(message)


class EmptyRunError(ValidationError):
    """Raised when an operation needs at least one step."""

    def __init__(self, what: str = "run"):
        self.what = what
        super().__init__(f"Empty {what}: at least one step is required")


class LengthMismatchError(ValidationError):
    """Raised when outcomes and forecasts have different lengths."""

    def __init__(self, outcomes_length: int, forecasts_length: int):
        self.outcomes_length = outcomes_length
        self.forecasts_length = forecasts_length
        super().__init__(
            f"Length mismatch: {outcomes_length} outcomes vs {forecasts_length} forecasts",
            details={"outcomes": outcomes_length, "forecasts": forecasts_length},
        )


class ForecastRangeError(ValidationError):
    """Raised when a forecast lies outside [0, 1]."""

    def __init__(self, step: int, value: float):
        self.step = step
        self.value = value
        super().__init__(
            f"Forecast at step {step} is {value!r}, outside [0, 1]",
            details={"step": step, "value": value},
        )


class NonBinaryOutcomeError(ValidationError):
    """Raised when an outcome is not exactly 0 or 1."""

    def __init__(self, step: int, value: object):
        self.step = step
        self.value = value
        super().__init__(
            f"Outcome at step {step} is {value!r}, expected 0 or 1",
            details={"step": step, "value": repr(value)},
        )


class InvalidProcessSpecError(ValidationError):
    """Raised when a process specification is inconsistent."""

    def __init__(self, kind: str, reason: str):
        self.kind = kind
        self.reason = reason
        super().__init__(f"Invalid '{kind}' process: {reason}")


class InvalidForecasterSpecError(ValidationError):
    """Raised when a forecaster specification is inconsistent."""

    def __init__(self, kind: str, reason: str):
        self.kind = kind
        self.reason = reason
        super().__init__(f"Invalid '{kind}' forecaster: {reason}")


class ForecasterStateError(ValidationError):
    """Raised when forecaster state does not match the information record."""

    def __init__(self, step: int, trials: int):
        self.step = step
        self.trials = trials
        super().__init__(
            f"Forecaster state has absorbed {trials} outcomes but record is for step {step}",
            details={"step": step, "trials": trials},
        )


class CriterionMismatchError(ValidationError):
    """Raised when a selection rule is passed to a criterion that cannot use it."""

    def __init__(self, rule_id: str, criterion: str, reason: str):
        self.rule_id = rule_id
        self.criterion = criterion
        super().__init__(f"Rule '{rule_id}' not admissible for {criterion} calibration: {reason}")


class NotHBasedError(ValidationError):
    """Raised when a criterion or experiment requires H-based forecasts."""

    def __init__(self, forecaster_id: str, operation: str):
        self.forecaster_id = forecaster_id
        self.operation = operation
        super().__init__(
            f"Forecaster '{forecaster_id}' is not H-based; {operation} is inapplicable"
        )


class OracleNotAllowedError(NotHBasedError):
    """Raised when the outcome-reading oracle is passed where it cannot be used."""

    def __init__(self, operation: str):
        super().__init__("oracle", operation)


class LookaheadRuleError(ValidationError):
    """Raised when a selection rule would read the current or a future outcome."""

    def __init__(self, rule_id: str, lag: int):
        self.rule_id = rule_id
        self.lag = lag
        super().__init__(
            f"Rule '{rule_id}' references outcomes at lag {lag}; only lags >= 1 are H-based"
        )


class EmptySubsequenceError(ValidationError):
    """Raised when a target subsequence selects no steps."""

    def __init__(self, target: float, tolerance: float):
        self.target = target
        self.tolerance = tolerance
        super().__init__(f"No steps with forecast within {tolerance} of {target}")


class IndexOutOfRangeError(ValidationError):
    """Raised when an array index lies outside its axis."""

    def __init__(self, axis: str, index: int, size: int):
        self.axis = axis
        self.index = index
        self.size = size
        super().__init__(f"{axis} index {index} out of range [0, {size})")


class ExactOracleLimitError(ValidationError):
    """Raised when an exact rational oracle is asked for a too-long sequence."""

    def __init__(self, length: int, limit: int):
        self.length = length
        self.limit = limit
        super().__init__(
            f"Exact evaluation limited to sequences of length <= {limit}, got {length}; "
            "use the log-probability evaluator"
        )


# =============================================================================
# Runtime errors (artifacts, replay, checkpoints)
# =============================================================================


class WorkbenchRuntimeError(WorkbenchError):
    """Base exception for failures that happen while executing a valid request."""

    def __init__(self, message: str, artifact: str | None = None):
        self.artifact = artifact
        super().__init__(message)


class ReplayMismatchError(WorkbenchRuntimeError):
    """Raised when a regenerated run differs from the stored artifact."""

    def __init__(self, artifact: str, field: str, first_step: int | None = None):
        self.field = field
        self.first_step = first_step
        where = f" (first difference at step {first_step})" if first_step else ""
        super().__init__(f"Replay of '{artifact}' differs in {field}{where}", artifact=artifact)


class ArtifactVersionError(WorkbenchRuntimeError):
    """Raised when an artifact was written by an incompatible format version."""

    def __init__(self, artifact: str, found: str | None, expected: str):
        self.found = found
        self.expected = expected
        super().__init__(
            f"Artifact '{artifact}' has format version {found!r}, expected {expected!r}",
            artifact=artifact,
        )


class CheckpointRecoveryError(WorkbenchRuntimeError):
    """Raised when a forecaster checkpoint cannot be saved or restored."""

    def __init__(self, checkpoint_id: str, reason: str):
        self.checkpoint_id = checkpoint_id
        self.reason = reason
        super().__init__(f"Checkpoint recovery failed for '{checkpoint_id}': {reason}")


class ArtifactWriteError(WorkbenchRuntimeError):
    """Raised when an output file cannot be written."""

    def __init__(self, path: str, reason: str):
        self.path = path
        self.reason = reason
        super().__init__(f"Cannot write '{path}': {reason}", artifact=path)
