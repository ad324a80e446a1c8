"""Core domain models shared by every workbench module.

This module defines:
- Run models (OutcomeSequence, ForecastSeries, ValidatedRun)
- Information models (InformationRecord, InformationBase)
- Report models (CalibrationCell, CalibrationReport)

All models are immutable pydantic models; arrays derived from them are cached
read-only numpy views.
"""

import math
from collections.abc import Iterator, Sequence
from enum import Enum
from functools import cached_property
from typing import Any

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    computed_field,
    field_serializer,
    field_validator,
    model_validator,
)

from src.exceptions import (
    ForecastRangeError,
    IndexOutOfRangeError,
    LengthMismatchError,
    NonBinaryOutcomeError,
    ValidationError,
)

UINT64_MAX = 2**64 - 1


def coerce_binary(values: Sequence[Any] | np.ndarray) -> list[int]:
    """Check that every value is exactly 0 or 1 and return them as ints.

    Raises:
        NonBinaryOutcomeError: naming the first offending step (1-based)
    """
    arr = np.asarray(values)
    if arr.size:
        ok = np.isin(arr, (0, 1))
        if not ok.all():
            index = int(np.argmin(ok))
            raise NonBinaryOutcomeError(step=index + 1, value=arr[index].item())
    return [int(v) for v in arr.astype(np.int64).tolist()]


def coerce_probabilities(values: Sequence[Any] | np.ndarray) -> list[float]:
    """Check that every value is a finite probability and return them as floats.

    Raises:
        ForecastRangeError: naming the first offending step (1-based)
    """
    arr = np.asarray(values, dtype=np.float64)
    if arr.size:
        ok = np.isfinite(arr) & (arr >= 0.0) & (arr <= 1.0)
        if not ok.all():
            index = int(np.argmin(ok))
            raise ForecastRangeError(step=index + 1, value=float(arr[index]))
    return arr.tolist()


def _read_only(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


# =============================================================================
# Runs
# =============================================================================


class OutcomeSequence(BaseModel):
    """Ordered binary outcomes e_1..e_N with generator provenance.

    Example:
        seq = OutcomeSequence(outcomes=[1, 0, 1], process_id="deterministic", seed=0)
        assert seq.n == 3
    """

    model_config = ConfigDict(frozen=True)

    outcomes: list[int] = Field(..., description="Binary outcomes e_1..e_N")
    process_id: str = Field(default="external", description="Label of the generating process")
    seed: int = Field(default=0, ge=0, le=UINT64_MAX, description="64-bit generator seed")

    @field_validator("outcomes", mode="before")
    @classmethod
    def validate_outcomes(cls, v: Any) -> list[int]:
        return coerce_binary(v)

    @property
    def n(self) -> int:
        return len(self.outcomes)

    @cached_property
    def array(self) -> np.ndarray:
        """Outcomes as a read-only int64 array."""
        return _read_only(np.asarray(self.outcomes, dtype=np.int64))

    def frequency(self) -> float:
        """Relative frequency of ones, f_N."""
        return math.fsum(self.outcomes) / self.n if self.outcomes else math.nan


class ForecastSeries(BaseModel):
    """Probability forecasts p_1..p_N issued by one forecaster.

    Attributes:
        h_based: True when every p_k used only the information record of step k
    """

    model_config = ConfigDict(frozen=True)

    forecasts: list[float] = Field(..., description="Forecasts p_k in [0, 1]")
    forecaster_id: str = Field(default="external", description="Label of the forecaster")
    h_based: bool = Field(default=True, description="Forecasts read only H_k")

    @field_validator("forecasts", mode="before")
    @classmethod
    def validate_forecasts(cls, v: Any) -> list[float]:
        return coerce_probabilities(v)

    @property
    def n(self) -> int:
        return len(self.forecasts)

    @cached_property
    def array(self) -> np.ndarray:
        """Forecasts as a read-only float64 array."""
        return _read_only(np.asarray(self.forecasts, dtype=np.float64))


class ValidatedRun(BaseModel):
    """Outcomes paired with the forecasts issued for them.

    Built by src.core.validation.align_run, which checks lengths and ranges.
    """

    model_config = ConfigDict(frozen=True)

    outcomes: OutcomeSequence
    forecasts: ForecastSeries

    @model_validator(mode="after")
    def validate_alignment(self) -> "ValidatedRun":
        if self.outcomes.n != self.forecasts.n:
            raise LengthMismatchError(self.outcomes.n, self.forecasts.n)
        return self

    @property
    def n(self) -> int:
        return self.outcomes.n

    @property
    def e(self) -> np.ndarray:
        return self.outcomes.array

    @property
    def p(self) -> np.ndarray:
        return self.forecasts.array

    @property
    def h_based(self) -> bool:
        return self.forecasts.h_based


# =============================================================================
# Information base
# =============================================================================


class Scenario(str, Enum):
    """How background information accumulates.

    Attributes:
        SEQUENTIAL: H_k holds e_1..e_{k-1} plus covariates of individuals 1..k
        INDEPENDENCE: H_k holds only individual k's own covariates
    """

    SEQUENTIAL = "sequential"
    INDEPENDENCE = "independence"


class InformationRecord(BaseModel):
    """Background record H_k available when forecasting step k.

    The outcome history is a read-only view; it never includes e_k.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    step: int = Field(..., ge=1, description="Step index k (1-based)")
    outcome_history: np.ndarray = Field(..., description="Outcomes e_1..e_{k-1}")
    covariates: dict[str, float | int] = Field(default_factory=dict)
    scenario: Scenario = Field(default=Scenario.SEQUENTIAL)

    @model_validator(mode="after")
    def validate_history_length(self) -> "InformationRecord":
        expected = self.step - 1 if self.scenario == Scenario.SEQUENTIAL else 0
        if len(self.outcome_history) != expected:
            raise ValidationError(
                f"Record for step {self.step} carries {len(self.outcome_history)} past "
                f"outcomes, expected {expected}",
                details={"step": self.step, "history": len(self.outcome_history)},
            )
        return self

    @field_serializer("outcome_history")
    def serialize_history(self, history: np.ndarray) -> list[int]:
        return [int(v) for v in history.tolist()]

    @property
    def last_outcome(self) -> int | None:
        return int(self.outcome_history[-1]) if len(self.outcome_history) else None


class InformationBase(BaseModel):
    """Per-step background records H_1..H_N for one outcome sequence.

    Covariate streams are aligned to steps (index k-1 holds step k's value) and
    are generated without reference to outcomes at steps >= k.

    Example:
        info = InformationBase.sequential([1, 0, 1], covariates={"category": [3, 1, 9]})
        record = info.record(3)
        assert record.outcome_history.tolist() == [1, 0]
    """

    model_config = ConfigDict(frozen=True)

    outcomes: list[int] = Field(..., description="e_1..e_N, exposed only as past history")
    covariates: dict[str, list[float]] = Field(default_factory=dict)
    scenario: Scenario = Field(default=Scenario.SEQUENTIAL)

    @field_validator("outcomes", mode="before")
    @classmethod
    def validate_outcomes(cls, v: Any) -> list[int]:
        return coerce_binary(v)

    @field_validator("covariates", mode="before")
    @classmethod
    def validate_covariates(cls, v: Any) -> dict[str, list[float]]:
        return {
            str(name): np.asarray(stream, dtype=np.float64).tolist() for name, stream in v.items()
        }

    @model_validator(mode="after")
    def validate_stream_lengths(self) -> "InformationBase":
        for name, stream in self.covariates.items():
            if len(stream) != len(self.outcomes):
                raise ValidationError(
                    f"Covariate '{name}' has {len(stream)} values for {len(self.outcomes)} steps"
                )
        return self

    @classmethod
    def sequential(
        cls,
        outcomes: Sequence[int] | np.ndarray,
        covariates: dict[str, Sequence[float] | np.ndarray] | None = None,
    ) -> "InformationBase":
        return cls(outcomes=outcomes, covariates=covariates or {})

    @classmethod
    def independence(
        cls,
        outcomes: Sequence[int] | np.ndarray,
        covariates: dict[str, Sequence[float] | np.ndarray] | None = None,
    ) -> "InformationBase":
        return cls(outcomes=outcomes, covariates=covariates or {}, scenario=Scenario.INDEPENDENCE)

    @property
    def n(self) -> int:
        return len(self.outcomes)

    @cached_property
    def outcome_array(self) -> np.ndarray:
        return _read_only(np.asarray(self.outcomes, dtype=np.int64))

    @cached_property
    def covariate_arrays(self) -> dict[str, np.ndarray]:
        return {
            name: _read_only(np.asarray(stream, dtype=np.float64))
            for name, stream in self.covariates.items()
        }

    def covariate_array(self, name: str) -> np.ndarray:
        """Covariate stream as a read-only array, or KeyError if absent."""
        return self.covariate_arrays[name]

    def record(self, step: int) -> InformationRecord:
        """Build H_k for 1 <= k <= N."""
        if not 1 <= step <= self.n:
            raise IndexOutOfRangeError("step", step, self.n + 1)
        if self.scenario == Scenario.SEQUENTIAL:
            history = self.outcome_array[: step - 1]
        else:
            history = self.outcome_array[:0]
        covariates = {
            name: _as_scalar(arr[step - 1]) for name, arr in self.covariate_arrays.items()
        }
        return InformationRecord(
            step=step, outcome_history=history, covariates=covariates, scenario=self.scenario
        )

    def records(self) -> Iterator[InformationRecord]:
        for step in range(1, self.n + 1):
            yield self.record(step)


def _as_scalar(value: np.floating) -> float | int:
    as_float = float(value)
    return int(as_float) if as_float.is_integer() else as_float


# =============================================================================
# Calibration reports
# =============================================================================


class Criterion(str, Enum):
    """Levels of the calibration hierarchy."""

    OVERALL = "overall"
    PROBABILITY = "probability"
    SUBSET = "subset"
    H_BASED = "h_based"


class CellVerdict(str, Enum):
    """Verdict for a single report cell.

    Attributes:
        PASS: |z| within the normal quantile (or a degenerate cell with zero discrepancy)
        FAIL: |z| beyond the quantile (or a degenerate cell with nonzero discrepancy)
        INSUFFICIENT: fewer members than the minimum cell count
        EMPTY: no members; carries no discrepancy
    """

    PASS = "pass"
    FAIL = "fail"
    INSUFFICIENT = "insufficient"
    EMPTY = "empty"


DECIDED_VERDICTS = (CellVerdict.PASS, CellVerdict.FAIL)


class CalibrationCell(BaseModel):
    """One rule or bin of a calibration report.

    Stores the raw sums; discrepancy and z are recomputed from them.
    """

    model_config = ConfigDict(frozen=True)

    cell_id: str = Field(..., description="Rule id or bin label")
    count: int = Field(..., ge=0)
    sum_forecast: float = Field(default=0.0, description="Sum of p_k over members")
    sum_outcome: float = Field(default=0.0, description="Sum of e_k over members")
    sum_variance: float = Field(default=0.0, description="Sum of p_k(1-p_k) over members")
    verdict: CellVerdict = Field(...)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def mean_forecast(self) -> float | None:
        return self.sum_forecast / self.count if self.count else None

    @computed_field  # type: ignore[prop-decorator]
    @property
    def outcome_frequency(self) -> float | None:
        return self.sum_outcome / self.count if self.count else None

    @computed_field  # type: ignore[prop-decorator]
    @property
    def discrepancy(self) -> float | None:
        if not self.count:
            return None
        return abs(self.sum_outcome / self.count - self.sum_forecast / self.count)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def z(self) -> float | None:
        """Standardised sum of e_k - p_k; None when empty or all forecasts are 0/1."""
        if not self.count or self.sum_variance <= 0.0:
            return None
        return (self.sum_outcome - self.sum_forecast) / math.sqrt(self.sum_variance)


class CalibrationReport(BaseModel):
    """Result of evaluating one calibration criterion."""

    model_config = ConfigDict(frozen=True)

    criterion: Criterion
    cells: list[CalibrationCell] = Field(default_factory=list)
    significance: float = Field(default=0.01, gt=0.0, lt=1.0)
    min_count: int = Field(default=30, ge=1)
    forecaster_id: str = Field(default="external")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def verdict(self) -> CellVerdict:
        """FAIL if any decided cell fails, PASS if all decided cells pass, else INSUFFICIENT."""
        decided = [c.verdict for c in self.cells if c.verdict in DECIDED_VERDICTS]
        if not decided:
            return CellVerdict.INSUFFICIENT
        if CellVerdict.FAIL in decided:
            return CellVerdict.FAIL
        return CellVerdict.PASS

    def cell(self, cell_id: str) -> CalibrationCell:
        for cell in self.cells:
            if cell.cell_id == cell_id:
                return cell
        raise KeyError(cell_id)

    def to_rows(self) -> list[dict[str, Any]]:
        """One flat row per cell, in the report CSV column order."""
        return [
            {
                "criterion": self.criterion.value,
                "rule_or_bin": cell.cell_id,
                "count": cell.count,
                "mean_p": cell.mean_forecast,
                "freq_e": cell.outcome_frequency,
                "delta": cell.discrepancy,
                "z": cell.z,
                "verdict": cell.verdict.value,
            }
            for cell in self.cells
        ]
