"""Dispatch an ExperimentSpec to its experiment inside a tracing span."""

import logging

from src.experiments.asymptotics import (
    run_finite_modification,
    run_identification,
    run_self_calibration,
)
from src.experiments.crossed import generate_crossed_array, run_crossed_array
from src.experiments.definetti import run_definetti
from src.experiments.information import run_info_base
from src.experiments.models import ExperimentKind, ExperimentResult, ExperimentSpec
from src.tracing import get_tracer

logger = logging.getLogger(__name__)


def run_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """
    Run one composite experiment.

    The experiment seed overrides the seeds inside the process and crossed-array
    specs, so (spec, seed) alone reproduces the result.

    Example:
        result = run_experiment(ExperimentSpec.model_validate_json(path.read_text()))
        print(result.summary())
    """
    tracer = get_tracer(__name__)
    with tracer.start_as_current_span(f"experiment.{spec.kind.value}") as span:
        span.set_attributes(
            {
                "experiment.kind": spec.kind.value,
                "experiment.n": spec.n or (spec.process.n if spec.process else 0),
                "experiment.replicates": spec.replicates,
                "experiment.seed": str(spec.seed),
            }
        )
        logger.info(f"Running {spec.kind.value} experiment (seed={spec.seed})")
        result = _dispatch(spec)
        span.set_attribute("experiment.status", "ok")
        return result


def _dispatch(spec: ExperimentSpec) -> ExperimentResult:
    if spec.kind == ExperimentKind.CROSSED_ARRAY:
        assert spec.crossed is not None
        array = generate_crossed_array(spec.crossed.model_copy(update={"seed": spec.seed}))
        return run_crossed_array(array, spec.row, spec.column, spec.min_margin_cells)

    process = spec.resolved_process()
    forecasters = spec.forecasters
    if spec.kind == ExperimentKind.IDENTIFICATION:
        return run_identification(process, forecasters[0], forecasters[1])
    if spec.kind == ExperimentKind.INFO_BASE:
        return run_info_base(process, forecasters[0], forecasters[1], spec.target, spec.tolerance)
    if spec.kind == ExperimentKind.DEFINETTI:
        return run_definetti(
            replicates=spec.replicates, seed=spec.seed, workers=spec.workers, process=process
        )
    if spec.kind == ExperimentKind.FINITE_MODIFICATION:
        return run_finite_modification(
            process,
            forecasters[0],
            modified_steps=spec.modified_steps,
            modified_value=spec.modified_value,
            significance=spec.significance,
            min_count=spec.min_count,
        )
    return run_self_calibration(
        process, forecasters[0], spec.replicates, seed=spec.seed, workers=spec.workers
    )
