"""Information-base refinement on a two-level risk process."""

import logging
import math

from src.exceptions import EmptySubsequenceError, NotHBasedError, ValidationError
from src.experiments.models import InfoBaseResult
from src.forecasters.engine import run_forecaster
from src.forecasters.models import ForecasterSpec
from src.processes.generators import generate
from src.processes.models import ProcessKind, ProcessSpec

logger = logging.getLogger(__name__)


def run_info_base(
    process: ProcessSpec,
    coarse: ForecasterSpec,
    deep: ForecasterSpec,
    target: float | None = None,
    tolerance: float = 1e-9,
    n: int | None = None,
    seed: int | None = None,
) -> InfoBaseResult:
    """
    Compare coarse and deep forecasts on the steps where the coarse forecast is p*.

    The coarse forecaster sees the information base H (outcome history only);
    the deep forecaster sees K, which adds the hidden deep-rate covariate. On the
    subsequence {k : |p_k - p*| <= tolerance}, both the average deep forecast
    and the outcome frequency converge to p*.

    Args:
        process: A two_level process
        coarse: H-based forecaster, typically constant(coarse_value)
        deep: Forecaster reading the deep rate, typically covariate_rate("deep_rate")
        target: p*, defaults to the process coarse_value
        tolerance: Selection half-width around p*

    Raises:
        EmptySubsequenceError: If no coarse forecast lies within tolerance of p*
    """
    if process.kind != ProcessKind.TWO_LEVEL:
        raise ValidationError(f"run_info_base needs a two_level process, got {process.kind.value}")
    if not coarse.h_based:
        raise NotHBasedError(coarse.forecaster_id, "run_info_base")

    update: dict[str, int] = {}
    if n is not None:
        update["n"] = n
    if seed is not None:
        update["seed"] = seed
    spec = process.model_copy(update=update) if update else process
    target = spec.coarse_value if target is None else target
    assert target is not None

    generated = generate(spec)
    p = run_forecaster(coarse, generated.sequence, generated.information_base()).array
    deep_info = generated.information_base(include_hidden=True)
    q = run_forecaster(deep, generated.sequence, deep_info).array

    selected = abs(p - target) <= tolerance
    count = int(selected.sum())
    if count == 0:
        raise EmptySubsequenceError(target, tolerance)

    e = generated.sequence.array
    result = InfoBaseResult(
        target=target,
        tolerance=tolerance,
        n=spec.n,
        count=count,
        mean_coarse_forecast=math.fsum(p[selected].tolist()) / count,
        mean_deep_forecast=math.fsum(q[selected].tolist()) / count,
        outcome_frequency=math.fsum(e[selected].tolist()) / count,
    )
    logger.info(
        f"Info base at p*={target}: {count} steps, deep mean {result.mean_deep_forecast:.4f}, "
        f"frequency {result.outcome_frequency:.4f}"
    )
    return result
