"""Limiting relative frequencies of exchangeable processes.

A Pólya urn started at (r0, b0) has a limiting red frequency distributed
Beta(r0, b0); a Bernoulli mixture has the prior as its limit law. The
experiment draws many replicates, records the frequency at n//2 and at n, and
measures the Kolmogorov-Smirnov distance of the final frequencies to the
limit law.
"""

import logging
from functools import partial

from scipy import stats

from src.exceptions import ValidationError
from src.experiments.models import DeFinettiResult
from src.experiments.replicates import run_replicates
from src.processes.generators import generate
from src.processes.models import ProcessKind, ProcessSpec
from src.processes.rng import replicate_seeds

logger = logging.getLogger(__name__)

MIN_REPLICATES = 100
KS_LEVEL = 0.99


def _frequencies(process: ProcessSpec, seed: int) -> tuple[float, float]:
    outcomes = generate(process.model_copy(update={"seed": seed}), quiet=True).sequence.array
    half = process.n // 2
    return float(outcomes[:half].mean()) if half else 0.0, float(outcomes.mean())


def _limit_shape(process: ProcessSpec) -> tuple[float, float] | None:
    if process.kind == ProcessKind.POLYA:
        assert process.r0 is not None and process.b0 is not None
        return float(process.r0), float(process.b0)
    assert process.prior is not None
    return process.prior.shape


def run_definetti(
    r0: int = 1,
    b0: int = 1,
    n: int = 10_000,
    replicates: int = 2000,
    seed: int = 0,
    workers: int | None = None,
    process: ProcessSpec | None = None,
) -> DeFinettiResult:
    """
    Distribution of the final red frequency over independent replicates.

    Args:
        r0: Initial red balls (ignored when process is given)
        b0: Initial green balls (ignored when process is given)
        n: Draws per replicate (ignored when process is given)
        replicates: Number of replicates, at least 100
        seed: Top-level seed; replicate i uses a seed derived from (seed, "definetti", i)
        workers: Worker processes for the replicate pool
        process: A polya or mixture process to use instead of Pólya(r0, b0)

    Returns:
        DeFinettiResult; the KS fields are None for a point-mass prior, whose
        limit law has no continuous CDF

    Example:
        result = run_definetti(r0=1, b0=1, n=10_000, replicates=2000, seed=0)
        assert result.ks_distance < result.ks_critical_value
    """
    if replicates < MIN_REPLICATES:
        raise ValidationError(
            f"run_definetti needs at least {MIN_REPLICATES} replicates, got {replicates}"
        )
    if process is None:
        process = ProcessSpec(kind=ProcessKind.POLYA, r0=r0, b0=b0, n=n, seed=seed)
    elif process.kind not in (ProcessKind.POLYA, ProcessKind.MIXTURE):
        raise ValidationError(
            f"run_definetti needs a polya or mixture process, got {process.kind.value}"
        )

    seeds = replicate_seeds(seed, replicates, "definetti")
    pairs = run_replicates(partial(_frequencies, process), seeds, workers)
    half_frequencies = [half for half, _ in pairs]
    frequencies = [final for _, final in pairs]

    reference = ks_distance = ks_pvalue = ks_critical = None
    shape = _limit_shape(process)
    if shape is not None:
        a, b = shape
        test = stats.kstest(frequencies, stats.beta(a, b).cdf)
        reference = f"beta({a:g},{b:g})"
        ks_distance = float(test.statistic)
        ks_pvalue = float(test.pvalue)
        ks_critical = float(stats.kstwo.ppf(KS_LEVEL, replicates))

    result = DeFinettiResult(
        process_id=process.process_id,
        n=process.n,
        replicates=replicates,
        seed=seed,
        frequencies=frequencies,
        half_frequencies=half_frequencies,
        reference=reference,
        ks_distance=ks_distance,
        ks_pvalue=ks_pvalue,
        ks_critical_value=ks_critical,
    )
    if ks_distance is not None:
        logger.info(
            f"de Finetti {result.process_id}: KS {ks_distance:.4f} vs critical {ks_critical:.4f}"
        )
    return result
