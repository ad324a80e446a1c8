"""Run artifacts: persisted (spec, seed, outcomes, forecasts) records and their replay.

An artifact stores the process spec and seed next to the data they produced.
Replaying regenerates the data from (spec, seed) and requires it to match the
stored values exactly.
"""

import json
import logging
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.calibration.adversary import adversarial_outcomes, adversary_covariates
from src.core.files import atomic_write_text
from src.core.models import (
    UINT64_MAX,
    ForecastSeries,
    InformationBase,
    OutcomeSequence,
    ValidatedRun,
)
from src.core.validation import align_run
from src.exceptions import ArtifactVersionError, ReplayMismatchError, ValidationError
from src.forecasters.engine import run_forecaster
from src.forecasters.models import ForecasterSpec
from src.processes.generators import HIDDEN_COVARIATES, generate
from src.processes.models import GeneratedProcess, ProcessSpec

logger = logging.getLogger(__name__)

FORMAT_VERSION = "1"


class RunArtifact(BaseModel):
    """
    A generated run as written to disk.

    process is None for adversarial runs, which are regenerated from the
    forecaster, the sequence length and the seed.
    """

    model_config = ConfigDict(frozen=True)

    format_version: str = Field(default=FORMAT_VERSION)
    process: ProcessSpec | None = Field(default=None, description="Generating process")
    seed: int = Field(..., ge=0, le=UINT64_MAX)
    outcomes: list[int] = Field(..., min_length=1)
    covariates: dict[str, list[float]] = Field(default_factory=dict)
    forecaster: ForecasterSpec | None = None
    forecasts: list[float] | None = None
    h_based: bool | None = None

    @model_validator(mode="after")
    def validate_consistency(self) -> "RunArtifact":
        if self.process is None and self.forecaster is None:
            raise ValidationError("Artifact needs a process or a forecaster to be replayable")
        if self.process is not None and self.process.seed != self.seed:
            raise ValidationError(
                f"Artifact seed {self.seed} differs from process seed {self.process.seed}"
            )
        if (self.forecaster is None) != (self.forecasts is None):
            raise ValidationError("Artifact forecaster and forecasts must be given together")
        if self.forecasts is not None and len(self.forecasts) != len(self.outcomes):
            raise ValidationError(
                f"Artifact has {len(self.outcomes)} outcomes but {len(self.forecasts)} forecasts"
            )
        return self

    @classmethod
    def from_generated(
        cls,
        generated: GeneratedProcess,
        forecaster: ForecasterSpec | None = None,
        forecasts: ForecastSeries | None = None,
    ) -> "RunArtifact":
        return cls(
            process=generated.spec,
            seed=generated.spec.seed,
            outcomes=generated.sequence.outcomes,
            covariates=generated.covariates,
            forecaster=forecaster,
            forecasts=forecasts.forecasts if forecasts is not None else None,
            h_based=forecasts.h_based if forecasts is not None else None,
        )

    @property
    def source_id(self) -> str:
        if self.process is not None:
            return self.process.process_id
        assert self.forecaster is not None
        return f"adversary({self.forecaster.forecaster_id})"

    def sequence(self) -> OutcomeSequence:
        return OutcomeSequence(outcomes=self.outcomes, process_id=self.source_id, seed=self.seed)

    def run(self) -> ValidatedRun:
        if self.forecasts is None or self.forecaster is None:
            raise ValidationError("Artifact holds no forecasts to evaluate")
        series = ForecastSeries(
            forecasts=self.forecasts,
            forecaster_id=self.forecaster.forecaster_id,
            h_based=bool(self.h_based),
        )
        return align_run(self.sequence(), series)

    def information_base(self) -> InformationBase:
        """Information base of the forecaster: H plus any hidden stream it reads."""
        hidden = set(HIDDEN_COVARIATES.get(self.process.kind, ())) if self.process else set()
        reads = self.forecaster.covariate_name if self.forecaster else None
        covariates = {
            name: values
            for name, values in self.covariates.items()
            if name not in hidden or name == reads
        }
        return InformationBase.sequential(self.outcomes, covariates=covariates)

    def to_json(self) -> str:
        # json.dumps writes floats with repr, which reads back bit-exactly
        return json.dumps(self.model_dump(mode="json", exclude_none=True), sort_keys=True) + "\n"


def forecaster_information(
    generated: GeneratedProcess, forecaster: ForecasterSpec
) -> InformationBase:
    """H for the forecaster, widened to K when it reads a hidden covariate."""
    include_hidden = forecaster.covariate_name in generated.hidden_covariates
    return generated.information_base(include_hidden=include_hidden)


def forecast_process(
    process: ProcessSpec, forecaster: ForecasterSpec | None = None
) -> tuple[GeneratedProcess, ForecastSeries | None]:
    generated = generate(process)
    if forecaster is None:
        return generated, None
    info = forecaster_information(generated, forecaster)
    forecasts = run_forecaster(forecaster, generated.sequence, info)
    return generated, forecasts


def adversary_artifact(forecaster: ForecasterSpec, n: int, seed: int) -> RunArtifact:
    outcomes, forecasts = adversarial_outcomes(forecaster, n, seed)
    return RunArtifact(
        seed=seed,
        outcomes=outcomes.outcomes,
        covariates=adversary_covariates(forecaster, n, seed),
        forecaster=forecaster,
        forecasts=forecasts.forecasts,
        h_based=forecasts.h_based,
    )


def write_artifact(artifact: RunArtifact, path: str | Path) -> Path:
    return atomic_write_text(path, artifact.to_json())


def read_artifact(path: str | Path) -> RunArtifact:
    """
    Load an artifact, checking its format version first.

    Raises:
        ArtifactVersionError: If written by another format version
        ValidationError: If the file is not UTF-8 JSON or lacks the seed
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ValidationError(f"Artifact '{path}' is not UTF-8 text: {e.reason}") from e
    try:
        data: dict[str, Any] = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValidationError(f"Artifact '{path}' is not valid JSON: {e.msg}") from e
    if not isinstance(data, dict):
        raise ValidationError(f"Artifact '{path}' must hold a JSON object")
    found = data.get("format_version")
    if found != FORMAT_VERSION:
        raise ArtifactVersionError(str(path), None if found is None else str(found), FORMAT_VERSION)
    if "seed" not in data:
        raise ValidationError(f"Artifact '{path}' has no seed and cannot be replayed")
    return RunArtifact.model_validate(data)


def regenerate(artifact: RunArtifact) -> RunArtifact:
    """Rebuild an artifact from its spec and seed alone."""
    if artifact.process is None:
        assert artifact.forecaster is not None
        return adversary_artifact(artifact.forecaster, len(artifact.outcomes), artifact.seed)
    generated, forecasts = forecast_process(artifact.process, artifact.forecaster)
    return RunArtifact.from_generated(generated, artifact.forecaster, forecasts)


def _first_difference(stored: list[Any], fresh: list[Any]) -> int | None:
    """1-indexed first step where the lists differ (None when equal)."""
    if stored == fresh:
        return None
    common = min(len(stored), len(fresh))
    differs = np.flatnonzero(np.asarray(stored[:common]) != np.asarray(fresh[:common]))
    return int(differs[0]) + 1 if differs.size else common + 1


def replay(path: str | Path) -> RunArtifact:
    """
    Regenerate the run stored at path and require bit-identical data.

    Returns:
        The verified artifact

    Raises:
        ReplayMismatchError: On the first field whose regenerated values differ
    """
    stored = read_artifact(path)
    fresh = regenerate(stored)
    name = str(path)

    step = _first_difference(stored.outcomes, fresh.outcomes)
    if step is not None:
        raise ReplayMismatchError(name, "outcomes", step)
    if sorted(stored.covariates) != sorted(fresh.covariates):
        raise ReplayMismatchError(name, "covariates")
    for key, values in stored.covariates.items():
        step = _first_difference(values, fresh.covariates[key])
        if step is not None:
            raise ReplayMismatchError(name, f"covariates.{key}", step)
    if stored.forecasts is not None and fresh.forecasts is not None:
        step = _first_difference(stored.forecasts, fresh.forecasts)
        if step is not None:
            raise ReplayMismatchError(name, "forecasts", step)
    if stored.h_based != fresh.h_based:
        raise ReplayMismatchError(name, "h_based")

    logger.info(f"Replayed {name}: {len(stored.outcomes)} steps identical")
    return stored
