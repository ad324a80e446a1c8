"""Run configuration for the command-line front end.

A RunConfig is assembled from an optional --config JSON file and the command
line flags, flags winning. Every nested spec is a pydantic model from its own
package, so a config that parses has already passed each module's checks.
"""

import json
from enum import Enum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.calibration.models import (
    DEFAULT_BIN_WIDTH,
    DEFAULT_MIN_COUNT,
    DEFAULT_SIGNIFICANCE,
    BinSpec,
)
from src.core.models import UINT64_MAX
from src.core.rules import SelectionRule
from src.exceptions import ValidationError
from src.experiments.models import ExperimentSpec
from src.forecasters.models import ForecasterSpec
from src.processes.models import ProcessSpec


class Command(str, Enum):
    """CLI sub-commands."""

    SIMULATE = "simulate"
    FORECAST = "forecast"
    EVALUATE = "evaluate"
    ADVERSARY = "adversary"
    EXPERIMENT = "experiment"
    WILSON = "wilson"
    REPLAY = "replay"


class OutputFormat(str, Enum):
    """Format of tabular report files."""

    CSV = "csv"
    JSON = "json"


class RunConfig(BaseModel):
    """
    Everything one CLI invocation needs.

    Example:
        config = RunConfig(
            command=Command.EVALUATE,
            process=ProcessSpec(kind=ProcessKind.DETERMINISTIC, pattern=[1, 0], n=10_000),
            forecaster=ForecasterSpec.constant(0.5),
            rules=[SelectionRule.every_mth(2, 1, rule_id="odd")],
        )
    """

    model_config = ConfigDict(frozen=True)

    command: Command = Field(..., description="Sub-command to execute")
    process: ProcessSpec | None = Field(default=None, description="Outcome process")
    forecaster: ForecasterSpec | None = Field(default=None, description="Forecaster")
    experiment: ExperimentSpec | None = Field(default=None, description="Composite experiment")
    artifact: Path | None = Field(default=None, description="Run artifact to evaluate or replay")
    rules: list[SelectionRule] = Field(
        default_factory=list,
        description="Selection rules for evaluate (default: the shipped H-based family)",
    )
    bin_width: float = Field(default=DEFAULT_BIN_WIDTH, gt=0.0, le=1.0)
    significance: float = Field(default=DEFAULT_SIGNIFICANCE, gt=0.0, lt=1.0)
    min_count: int = Field(default=DEFAULT_MIN_COUNT, ge=1)
    n: int | None = Field(default=None, ge=1, description="Overrides the sequence length")
    seed: int | None = Field(default=None, ge=0, le=UINT64_MAX, description="Top-level seed")
    p_hat: float = Field(default=0.75, ge=0.0, le=1.0, description="Observed proportion for wilson")
    confidence: float = Field(default=0.95, gt=0.0, lt=1.0)
    out: Path | None = Field(default=None, description="Output directory (no files when omitted)")
    format: OutputFormat = Field(default=OutputFormat.CSV)

    @model_validator(mode="after")
    def validate_command_inputs(self) -> "RunConfig":
        command = self.command
        if command in (Command.SIMULATE, Command.FORECAST) and self.process is None:
            raise ValidationError(f"{command.value} needs a process spec")
        if command in (Command.FORECAST, Command.ADVERSARY) and self.forecaster is None:
            raise ValidationError(f"{command.value} needs a forecaster spec")
        if command == Command.ADVERSARY and self.n is None:
            raise ValidationError("adversary needs --n")
        if command == Command.EXPERIMENT and self.experiment is None:
            raise ValidationError("experiment needs an experiment spec")
        if command == Command.REPLAY and self.artifact is None:
            raise ValidationError("replay needs an artifact path")
        if command == Command.EVALUATE and self.artifact is None:
            if self.process is None or self.forecaster is None:
                raise ValidationError("evaluate needs an artifact or a process and a forecaster")
        return self

    @property
    def bins(self) -> BinSpec:
        return BinSpec(width=self.bin_width, min_count=self.min_count)

    def resolved_process(self) -> ProcessSpec:
        """Process spec with --n and --seed applied."""
        assert self.process is not None
        update: dict[str, int] = {}
        if self.n is not None:
            update["n"] = self.n
        if self.seed is not None:
            update["seed"] = self.seed
        return self.process.model_copy(update=update) if update else self.process

    def resolved_experiment(self) -> ExperimentSpec:
        assert self.experiment is not None
        if self.seed is None:
            return self.experiment
        return self.experiment.model_copy(update={"seed": self.seed})


def load_config_file(path: str | Path) -> dict[str, Any]:
    """
    Read a JSON config file into a dict.

    Raises:
        ValidationError: If the file is empty, not UTF-8 JSON, or not a JSON object
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ValidationError(f"Config file '{path}' is not UTF-8 text: {e.reason}") from e
    if not text.strip():
        raise ValidationError(f"Config file '{path}' is empty")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(
            f"Config file '{path}' is not valid JSON: {e.msg} (line {e.lineno}, column {e.colno})"
        ) from e
    if not isinstance(data, dict):
        raise ValidationError(
            f"Config file '{path}' must hold a JSON object, got {type(data).__name__}"
        )
    return data


def build_config(
    command: str,
    config_path: str | Path | None = None,
    overrides: dict[str, Any] | None = None,
) -> RunConfig:
    """Merge the config file with flag overrides (None values are ignored)."""
    data = load_config_file(config_path) if config_path is not None else {}
    data["command"] = command
    data.update({key: value for key, value in (overrides or {}).items() if value is not None})
    return RunConfig.model_validate(data)
