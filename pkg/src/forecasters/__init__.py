"""Sequential probability forecasters."""

from src.forecasters.checkpoint import CheckpointStore
from src.forecasters.engine import forecast_next, run_forecaster
from src.forecasters.models import (
    ForecasterCheckpoint,
    ForecasterKind,
    ForecasterSpec,
    ForecasterState,
)

__all__ = [
    "CheckpointStore",
    "ForecasterCheckpoint",
    "ForecasterKind",
    "ForecasterSpec",
    "ForecasterState",
    "forecast_next",
    "run_forecaster",
]
