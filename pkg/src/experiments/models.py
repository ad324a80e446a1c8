"""Experiment data models.

This module defines:
- ExperimentKind / ExperimentSpec: serialisable experiment requests
- CrossedArraySpec / CrossedArray: student x examination (x resit) fixtures
- Result models for each experiment, each able to emit a summary and a table
"""

import math
from enum import Enum
from typing import Any

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator
from scipy.special import expit

from src.calibration.models import DEFAULT_MIN_COUNT, DEFAULT_SIGNIFICANCE
from src.core.models import UINT64_MAX, CellVerdict
from src.exceptions import IndexOutOfRangeError, ValidationError
from src.forecasters.models import ForecasterSpec
from src.processes.models import ProcessKind, ProcessSpec

# =============================================================================
# Experiment specification
# =============================================================================


class ExperimentKind(str, Enum):
    """Composite experiments."""

    IDENTIFICATION = "identification"
    INFO_BASE = "info_base"
    DEFINETTI = "definetti"
    CROSSED_ARRAY = "crossed_array"
    FINITE_MODIFICATION = "finite_modification"
    SELF_CALIBRATION = "self_calibration"


class ResitMode(str, Enum):
    """How repeated sittings of one student/exam cell are drawn.

    Attributes:
        INDEPENDENT: Every sitting is Bernoulli(cell failure probability)
        POLYA: Sittings reinforce like a Pólya urn centred on the cell probability
    """

    INDEPENDENT = "independent"
    POLYA = "polya"


class CrossedArraySpec(BaseModel):
    """Row (student) and column (examination) effects of a crossed array.

    The failure probability of student i on exam j is
    expit(difficulty_j - ability_i): higher ability lowers it, a harder exam
    raises it.

    Example:
        spec = CrossedArraySpec(abilities=[0.0] * 200, difficulties=[0.0] * 200, resits=10)
    """

    model_config = ConfigDict(frozen=True)

    abilities: list[float] = Field(..., min_length=1, description="Row effects")
    difficulties: list[float] = Field(..., min_length=1, description="Column effects")
    resits: int = Field(default=1, ge=1, description="Sittings per cell")
    resit_mode: ResitMode = Field(default=ResitMode.INDEPENDENT)
    concentration: float = Field(default=2.0, gt=0.0, description="Urn weight for Pólya resits")
    seed: int = Field(default=0, ge=0, le=UINT64_MAX)

    @model_validator(mode="after")
    def validate_effects(self) -> "CrossedArraySpec":
        if not all(math.isfinite(v) for v in [*self.abilities, *self.difficulties]):
            raise ValidationError("Crossed-array effects must be finite")
        return self

    @property
    def shape(self) -> tuple[int, int, int]:
        return (len(self.abilities), len(self.difficulties), self.resits)

    def failure_probabilities(self) -> np.ndarray:
        """Students x exams table of cell failure probabilities."""
        abilities = np.asarray(self.abilities, dtype=np.float64)
        difficulties = np.asarray(self.difficulties, dtype=np.float64)
        return expit(difficulties[None, :] - abilities[:, None])

    def check_indices(self, row: int, column: int) -> None:
        students, exams, _ = self.shape
        if not 0 <= row < students:
            raise IndexOutOfRangeError("student", row, students)
        if not 0 <= column < exams:
            raise IndexOutOfRangeError("examination", column, exams)

    def cell_probability(self, row: int, column: int) -> float:
        self.check_indices(row, column)
        return float(expit(self.difficulties[column] - self.abilities[row]))


class CrossedArray(BaseModel):
    """Generated pass/fail tensor (1 = fail) of shape students x exams x resits."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    spec: CrossedArraySpec
    outcomes: np.ndarray = Field(
        ..., description="Binary failures, shape (students, exams, resits)"
    )

    @model_validator(mode="after")
    def validate_shape(self) -> "CrossedArray":
        if self.outcomes.shape != self.spec.shape:
            raise ValidationError(
                f"Outcome tensor has shape {self.outcomes.shape}, effects imply {self.spec.shape}"
            )
        return self

    def check_indices(self, row: int, column: int) -> None:
        self.spec.check_indices(row, column)

    def cell_probability(self, row: int, column: int) -> float:
        return self.spec.cell_probability(row, column)


class ExperimentSpec(BaseModel):
    """Request for one composite experiment.

    Only the fields of the chosen kind are used.

    Example:
        ExperimentSpec(
            kind=ExperimentKind.IDENTIFICATION,
            process=ProcessSpec(kind=ProcessKind.BERNOULLI, p=0.3, n=100_000),
            forecasters=[ForecasterSpec.bayes_mixture(PriorSpec.uniform()),
                         ForecasterSpec.bayes_mixture(PriorSpec.beta(2, 2))],
            seed=11,
        )
    """

    model_config = ConfigDict(frozen=True)

    kind: ExperimentKind = Field(...)
    process: ProcessSpec | None = Field(default=None, description="Outcome process")
    forecasters: list[ForecasterSpec] = Field(default_factory=list)
    n: int | None = Field(default=None, ge=1, description="Overrides process.n")
    replicates: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, le=UINT64_MAX)
    target: float | None = Field(default=None, ge=0.0, le=1.0, description="Coarse forecast p*")
    tolerance: float = Field(default=1e-9, gt=0.0, description="Half-width around target")
    crossed: CrossedArraySpec | None = None
    row: int = Field(default=0, ge=0, description="Student index")
    column: int = Field(default=0, ge=0, description="Examination index")
    min_margin_cells: int = Field(default=1000, ge=1)
    modified_steps: int = Field(default=100, ge=1)
    modified_value: float = Field(default=1.0, ge=0.0, le=1.0)
    significance: float = Field(default=DEFAULT_SIGNIFICANCE, gt=0.0, lt=1.0)
    min_count: int = Field(default=DEFAULT_MIN_COUNT, ge=1)
    workers: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def validate_kind_fields(self) -> "ExperimentSpec":
        forecaster_counts = {
            ExperimentKind.IDENTIFICATION: 2,
            ExperimentKind.INFO_BASE: 2,
            ExperimentKind.DEFINETTI: 0,
            ExperimentKind.FINITE_MODIFICATION: 1,
            ExperimentKind.SELF_CALIBRATION: 1,
        }
        if self.kind == ExperimentKind.CROSSED_ARRAY:
            if self.crossed is None:
                raise ValidationError("crossed_array experiments need a crossed array spec")
            return self
        forecaster_count = forecaster_counts[self.kind]
        if self.process is None:
            raise ValidationError(f"{self.kind.value} experiments need a process")
        if len(self.forecasters) != forecaster_count:
            raise ValidationError(
                f"{self.kind.value} experiments need {forecaster_count} forecasters, "
                f"got {len(self.forecasters)}"
            )
        if self.kind == ExperimentKind.INFO_BASE:
            if self.process.kind != ProcessKind.TWO_LEVEL:
                raise ValidationError("info_base experiments need a two_level process")
        if self.kind == ExperimentKind.DEFINETTI:
            if self.process.kind not in (ProcessKind.POLYA, ProcessKind.MIXTURE):
                raise ValidationError("definetti experiments need a polya or mixture process")
        return self

    def resolved_process(self) -> ProcessSpec:
        """Process spec with n and seed taken from the experiment."""
        assert self.process is not None
        update: dict[str, Any] = {"seed": self.seed}
        if self.n is not None:
            update["n"] = self.n
        return self.process.model_copy(update=update)


# =============================================================================
# Results
# =============================================================================


class IdentificationResult(BaseModel):
    """Divergence d_k = |p_k - q_k| between two forecasters over one sequence."""

    model_config = ConfigDict(frozen=True)

    forecaster_a: str
    forecaster_b: str
    process_id: str
    seed: int
    divergence: list[float]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def tail_max(self) -> float:
        """max d_k over k > n/2."""
        n = len(self.divergence)
        tail = self.divergence[n // 2 :]
        return max(tail) if tail else 0.0

    def summary(self) -> dict[str, Any]:
        return self.model_dump(exclude={"divergence"}) | {"n": len(self.divergence)}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"step": range(1, len(self.divergence) + 1), "d_k": self.divergence})


class InfoBaseResult(BaseModel):
    """Averages over the steps whose coarse forecast lies within tolerance of the target."""

    model_config = ConfigDict(frozen=True)

    target: float
    tolerance: float
    n: int
    count: int = Field(..., ge=1)
    mean_coarse_forecast: float
    mean_deep_forecast: float
    outcome_frequency: float

    def summary(self) -> dict[str, Any]:
        return self.model_dump()

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([self.model_dump()])


class DeFinettiResult(BaseModel):
    """Final relative frequencies across replicates and their distance to the limit law."""

    model_config = ConfigDict(frozen=True)

    process_id: str
    n: int
    replicates: int
    seed: int
    frequencies: list[float]
    half_frequencies: list[float] = Field(description="f at step n//2 per replicate")
    reference: str | None = Field(default=None, description="Limit law, e.g. beta(1,1)")
    ks_distance: float | None = None
    ks_pvalue: float | None = None
    ks_critical_value: float | None = Field(default=None, description="1% critical value")

    @computed_field  # type: ignore[prop-decorator]
    @property
    def half_gap_fraction(self) -> float:
        """Fraction of replicates with |f_{n/2} - f_n| < 0.05."""
        gaps = [abs(a - b) for a, b in zip(self.half_frequencies, self.frequencies, strict=True)]
        return sum(g < 0.05 for g in gaps) / len(gaps)

    def summary(self) -> dict[str, Any]:
        return self.model_dump(exclude={"frequencies", "half_frequencies"})

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "replicate": range(len(self.frequencies)),
                "f_half": self.half_frequencies,
                "f_n": self.frequencies,
            }
        )


class CrossedArrayRisks(BaseModel):
    """Three risks for one student on one examination, conditioned on different information."""

    model_config = ConfigDict(frozen=True)

    row: int
    column: int
    row_margin: float = Field(..., description="Failure frequency on the student's other exams")
    column_margin: float = Field(
        ..., description="Failure frequency of other students on this exam"
    )
    cell_probability: float = Field(..., description="Failure probability from the link function")
    cell_frequency: float = Field(..., description="Failure frequency over this cell's resits")
    row_cells: int
    column_cells: int

    def summary(self) -> dict[str, Any]:
        return self.model_dump()

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {"estimate": "row_margin", "value": self.row_margin, "cells": self.row_cells},
                {
                    "estimate": "column_margin",
                    "value": self.column_margin,
                    "cells": self.column_cells,
                },
                {"estimate": "cell_probability", "value": self.cell_probability, "cells": 1},
            ]
        )


class FiniteModificationResult(BaseModel):
    """Per-rule verdicts before and after overwriting the first forecasts."""

    model_config = ConfigDict(frozen=True)

    forecaster_id: str
    n: int
    modified_steps: int
    rule_ids: list[str]
    baseline_discrepancy: list[float | None]
    modified_discrepancy: list[float | None]
    baseline_verdicts: list[CellVerdict]
    modified_verdicts: list[CellVerdict]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def changed_rules(self) -> list[str]:
        return [
            rule_id
            for rule_id, before, after in zip(
                self.rule_ids, self.baseline_verdicts, self.modified_verdicts, strict=True
            )
            if before != after
        ]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def max_shift(self) -> float:
        shifts = [
            abs(a - b)
            for a, b in zip(self.baseline_discrepancy, self.modified_discrepancy, strict=True)
            if a is not None and b is not None
        ]
        return max(shifts, default=0.0)

    def summary(self) -> dict[str, Any]:
        return {
            "forecaster_id": self.forecaster_id,
            "n": self.n,
            "modified_steps": self.modified_steps,
            "rules": len(self.rule_ids),
            "changed_rules": self.changed_rules,
            "max_shift": self.max_shift,
        }

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "rule": self.rule_ids,
                "baseline_delta": self.baseline_discrepancy,
                "modified_delta": self.modified_discrepancy,
                "baseline_verdict": [v.value for v in self.baseline_verdicts],
                "modified_verdict": [v.value for v in self.modified_verdicts],
            }
        )


class SelfCalibrationResult(BaseModel):
    """Full-sequence z statistics of a forecaster on data from its own model."""

    model_config = ConfigDict(frozen=True)

    process_id: str
    forecaster_id: str
    n: int
    seed: int
    z_values: list[float | None]
    bound: float = Field(default=1.96)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def coverage(self) -> float:
        """Fraction of replicates with |z| <= bound."""
        covered = sum(z is not None and abs(z) <= self.bound for z in self.z_values)
        return covered / len(self.z_values)

    def summary(self) -> dict[str, Any]:
        return self.model_dump(exclude={"z_values"}) | {"replicates": len(self.z_values)}

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"replicate": range(len(self.z_values)), "z": self.z_values})


ExperimentResult = (
    IdentificationResult
    | InfoBaseResult
    | DeFinettiResult
    | CrossedArrayRisks
    | FiniteModificationResult
    | SelfCalibrationResult
)
