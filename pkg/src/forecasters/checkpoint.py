"""File-based checkpoint store for sequential forecasting runs.

Checkpoints are JSON files named `<run_id>-<step>.json` under one directory
(default: env PREQ_CHECKPOINT_DIR, else `.checkpoints`), written atomically.
"""

import json
import logging
import os
import re
from pathlib import Path

from pydantic import ValidationError as PydanticValidationError

from src.core.files import atomic_write_text
from src.exceptions import ArtifactWriteError, CheckpointRecoveryError
from src.forecasters.models import ForecasterCheckpoint, ForecasterSpec, ForecasterState

logger = logging.getLogger(__name__)

DEFAULT_CHECKPOINT_DIR = ".checkpoints"
_RUN_ID_PATTERN = re.compile(r"^[A-Za-z0-9_.-]+$")


class CheckpointStore:
    """Saves and restores ForecasterCheckpoints for one run.

    Example:
        store = CheckpointStore(run_id="laplace-seed-7")
        store.save_checkpoint(spec, state, forecasts)

        # after an interruption
        checkpoint = store.latest()
        if checkpoint is not None:
            state, forecasts = checkpoint.to_state()
    """

    def __init__(self, run_id: str, directory: str | Path | None = None):
        """Initialize CheckpointStore.

        Args:
            run_id: Identifier shared by all checkpoints of the run
            directory: Checkpoint directory (default: env PREQ_CHECKPOINT_DIR or .checkpoints)
        """
        if not _RUN_ID_PATTERN.match(run_id):
            raise CheckpointRecoveryError(
                run_id, "run_id may only contain letters, digits, '.', '_' and '-'"
            )
        self.run_id = run_id
        self.directory = Path(directory or os.getenv("PREQ_CHECKPOINT_DIR", DEFAULT_CHECKPOINT_DIR))

    def _path(self, step: int) -> Path:
        return self.directory / f"{self.run_id}-{step:010d}.json"

    def save_checkpoint(
        self,
        forecaster: ForecasterSpec,
        state: ForecasterState,
        forecasts: list[float],
    ) -> str:
        """Save a checkpoint after len(forecasts) steps.

        Returns:
            Checkpoint ID for the saved checkpoint
        """
        checkpoint = ForecasterCheckpoint.from_state(self.run_id, forecaster, state, forecasts)
        try:
            atomic_write_text(self._path(checkpoint.step), checkpoint.model_dump_json())
        except ArtifactWriteError as e:
            logger.exception(f"Failed to save checkpoint {checkpoint.checkpoint_id}")
            raise CheckpointRecoveryError(checkpoint.checkpoint_id, e.reason) from e

        logger.debug(f"Saved checkpoint {checkpoint.checkpoint_id} at step {checkpoint.step}")
        return checkpoint.checkpoint_id

    def load_checkpoint(self, step: int) -> ForecasterCheckpoint:
        """Load the checkpoint taken after `step` forecasts.

        Raises:
            CheckpointRecoveryError: If the checkpoint is missing or invalid
        """
        path = self._path(step)
        checkpoint_id = f"{self.run_id}/{step}"
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            checkpoint = ForecasterCheckpoint(**data)
        except FileNotFoundError as e:
            raise CheckpointRecoveryError(checkpoint_id, "checkpoint not found") from e
        except (OSError, json.JSONDecodeError, PydanticValidationError) as e:
            raise CheckpointRecoveryError(checkpoint_id, f"unreadable checkpoint: {e}") from e

        if checkpoint.run_id != self.run_id or checkpoint.step != step:
            raise CheckpointRecoveryError(
                checkpoint_id, "checkpoint belongs to another run or step"
            )
        logger.info(f"Loaded checkpoint {checkpoint.checkpoint_id} at step {step}")
        return checkpoint

    def steps(self) -> list[int]:
        """Steps with a stored checkpoint, ascending."""
        if not self.directory.is_dir():
            return []
        prefix = f"{self.run_id}-"
        found = []
        for path in self.directory.glob(f"{prefix}*.json"):
            suffix = path.stem[len(prefix) :]
            if suffix.isdigit():
                found.append(int(suffix))
        return sorted(found)

    def latest(self) -> ForecasterCheckpoint | None:
        steps = self.steps()
        return self.load_checkpoint(steps[-1]) if steps else None

    def clear(self) -> int:
        """Delete every checkpoint of the run; returns how many were removed."""
        removed = 0
        for step in self.steps():
            self._path(step).unlink(missing_ok=True)
            removed += 1
        return removed
