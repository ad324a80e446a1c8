"""Finite-N surrogates for the asymptotic claims about H-valid forecasts.

- run_identification: two valid forecasters must agree in the limit
- run_finite_modification: changing finitely many forecasts leaves verdicts (asymptotically) alone
- run_self_calibration: a forecaster is calibrated on data from its own model
"""

import logging
from collections.abc import Sequence
from functools import partial

import numpy as np

from src.calibration.criteria import default_rule_family, h_calibration, overall_calibration
from src.calibration.models import DEFAULT_MIN_COUNT, DEFAULT_SIGNIFICANCE
from src.core.models import ForecastSeries
from src.core.rules import SelectionRule
from src.core.validation import align_run
from src.exceptions import NotHBasedError, OracleNotAllowedError, ValidationError
from src.experiments.models import (
    FiniteModificationResult,
    IdentificationResult,
    SelfCalibrationResult,
)
from src.experiments.replicates import run_replicates
from src.forecasters.engine import run_forecaster
from src.forecasters.models import ForecasterKind, ForecasterSpec
from src.processes.generators import generate
from src.processes.models import ProcessSpec
from src.processes.rng import replicate_seeds

logger = logging.getLogger(__name__)


def _require_h_based(forecaster: ForecasterSpec, operation: str) -> None:
    if forecaster.kind == ForecasterKind.ORACLE:
        raise OracleNotAllowedError(operation)
    if not forecaster.h_based:
        raise NotHBasedError(forecaster.forecaster_id, operation)


def _resolve(process: ProcessSpec, n: int | None, seed: int | None) -> ProcessSpec:
    update: dict[str, int] = {}
    if n is not None:
        update["n"] = n
    if seed is not None:
        update["seed"] = seed
    return process.model_copy(update=update) if update else process


def run_identification(
    process: ProcessSpec,
    forecaster_a: ForecasterSpec,
    forecaster_b: ForecasterSpec,
    n: int | None = None,
    seed: int | None = None,
) -> IdentificationResult:
    """
    Divergence series d_k = |p_k - q_k| of two forecasters on one sequence.

    Both forecasters should be valid for the process by construction, e.g. two
    beta-prior Bayes forecasters on a Bernoulli process.

    Args:
        process: Outcome process
        forecaster_a: First forecaster
        forecaster_b: Second forecaster
        n: Overrides process.n
        seed: Overrides process.seed

    Raises:
        OracleNotAllowedError: If either forecaster is the oracle
    """
    for forecaster in (forecaster_a, forecaster_b):
        _require_h_based(forecaster, "run_identification")

    spec = _resolve(process, n, seed)
    generated = generate(spec)
    info = generated.information_base()
    p = run_forecaster(forecaster_a, generated.sequence, info).array
    q = run_forecaster(forecaster_b, generated.sequence, info).array

    result = IdentificationResult(
        forecaster_a=forecaster_a.forecaster_id,
        forecaster_b=forecaster_b.forecaster_id,
        process_id=spec.process_id,
        seed=spec.seed,
        divergence=np.abs(p - q).tolist(),
    )
    logger.info(
        f"Identification {result.forecaster_a} vs {result.forecaster_b}: "
        f"tail max {result.tail_max:.3g}"
    )
    return result


def run_finite_modification(
    process: ProcessSpec,
    forecaster: ForecasterSpec,
    modified_steps: int = 100,
    modified_value: float = 1.0,
    rules: Sequence[SelectionRule] | None = None,
    n: int | None = None,
    seed: int | None = None,
    significance: float = DEFAULT_SIGNIFICANCE,
    min_count: int = DEFAULT_MIN_COUNT,
) -> FiniteModificationResult:
    """
    Overwrite the first forecasts of an H-based series and re-evaluate H-calibration.

    A cell with c members moves its discrepancy by at most modified_steps / c,
    so at large N the verdicts are those of the unmodified series.

    Raises:
        ValidationError: If modified_steps is not below n
    """
    _require_h_based(forecaster, "run_finite_modification")
    spec = _resolve(process, n, seed)
    if modified_steps >= spec.n:
        raise ValidationError(f"modified_steps {modified_steps} must be below n={spec.n}")

    generated = generate(spec)
    info = generated.information_base()
    forecasts = run_forecaster(forecaster, generated.sequence, info)
    family = list(rules) if rules is not None else default_rule_family(info)

    modified = forecasts.array.copy()
    modified[:modified_steps] = modified_value
    modified_series = ForecastSeries(
        forecasts=modified,
        forecaster_id=f"{forecaster.forecaster_id}+first{modified_steps}={modified_value:g}",
        h_based=True,
    )

    baseline = h_calibration(
        align_run(generated.sequence, forecasts), info, family, significance, min_count
    )
    changed = h_calibration(
        align_run(generated.sequence, modified_series), info, family, significance, min_count
    )
    return FiniteModificationResult(
        forecaster_id=forecaster.forecaster_id,
        n=spec.n,
        modified_steps=modified_steps,
        rule_ids=[cell.cell_id for cell in baseline.cells],
        baseline_discrepancy=[cell.discrepancy for cell in baseline.cells],
        modified_discrepancy=[cell.discrepancy for cell in changed.cells],
        baseline_verdicts=[cell.verdict for cell in baseline.cells],
        modified_verdicts=[cell.verdict for cell in changed.cells],
    )


def _full_sequence_z(process: ProcessSpec, forecaster: ForecasterSpec, seed: int) -> float | None:
    generated = generate(process.model_copy(update={"seed": seed}), quiet=True)
    forecasts = run_forecaster(forecaster, generated.sequence, generated.information_base())
    return overall_calibration(align_run(generated.sequence, forecasts)).cells[0].z


def run_self_calibration(
    process: ProcessSpec,
    forecaster: ForecasterSpec,
    replicates: int,
    n: int | None = None,
    seed: int = 0,
    workers: int | None = None,
) -> SelfCalibrationResult:
    """
    Full-sequence z statistics over replicates of a process paired with its own predictive.

    For matched pairs (bayes_mixture on a mixture with the same prior,
    polya_predictive on the same urn) the z values are approximately standard
    normal, so about 95% satisfy |z| <= 1.96.
    """
    _require_h_based(forecaster, "run_self_calibration")
    spec = _resolve(process, n, None)
    seeds = replicate_seeds(seed, replicates, "self_calibration")
    z_values = run_replicates(partial(_full_sequence_z, spec, forecaster), seeds, workers)
    result = SelfCalibrationResult(
        process_id=spec.process_id,
        forecaster_id=forecaster.forecaster_id,
        n=spec.n,
        seed=seed,
        z_values=z_values,
    )
    logger.info(f"Self-calibration of {result.forecaster_id}: coverage {result.coverage:.3f}")
    return result
