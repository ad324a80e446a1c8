"""Seeded generators for every outcome-producing process.

Each generator validates its parameters through ProcessSpec, builds its own
Philox stream from the seed and returns an OutcomeSequence tagged with the
process label and seed. generate() dispatches a ProcessSpec to the matching
generator and bundles covariate streams into a GeneratedProcess.
"""

import logging
from collections.abc import Sequence

import numpy as np

from src.core.models import OutcomeSequence
from src.processes.models import (
    GeneratedProcess,
    PriorSpec,
    ProcessKind,
    ProcessSpec,
    UrnTrajectory,
)
from src.processes.rng import make_rng

logger = logging.getLogger(__name__)

CATEGORY_COVARIATE = "category"
DEEP_RATE_COVARIATE = "deep_rate"

# streams recorded by a process but outside the information base H
HIDDEN_COVARIATES: dict[ProcessKind, tuple[str, ...]] = {
    ProcessKind.TWO_LEVEL: (DEEP_RATE_COVARIATE,),
}


def _sequence(spec: ProcessSpec, outcomes: np.ndarray) -> OutcomeSequence:
    return OutcomeSequence(outcomes=outcomes, process_id=spec.process_id, seed=spec.seed)


def gen_bernoulli(p: float, n: int, seed: int = 0) -> OutcomeSequence:
    """I.i.d. Bernoulli(p) outcomes."""
    spec = ProcessSpec(kind=ProcessKind.BERNOULLI, p=p, n=n, seed=seed)
    return _sequence(spec, _bernoulli_draws(spec))


def _bernoulli_draws(spec: ProcessSpec) -> np.ndarray:
    assert spec.p is not None
    u = make_rng(spec.seed, ProcessKind.BERNOULLI.value).random(spec.n)
    return (u < spec.p).astype(np.int64)


def gen_polya(r0: int, b0: int, n: int, seed: int = 0) -> tuple[OutcomeSequence, UrnTrajectory]:
    """
    Draw n balls from a Pólya urn starting with r0 red and b0 green balls.

    Each drawn ball is replaced together with one more of the same colour, so
    draw k is red with probability r/(r+b) for the counts before it.

    Returns:
        Tuple of (outcomes with 1 for red, urn counts before each draw)
    """
    spec = ProcessSpec(kind=ProcessKind.POLYA, r0=r0, b0=b0, n=n, seed=seed)
    outcomes, trajectory = _polya_draws(spec)
    return _sequence(spec, outcomes), trajectory


def _polya_draws(spec: ProcessSpec) -> tuple[np.ndarray, UrnTrajectory]:
    assert spec.r0 is not None and spec.b0 is not None
    uniforms = make_rng(spec.seed, ProcessKind.POLYA.value).random(spec.n).tolist()
    red, total = spec.r0, spec.r0 + spec.b0
    reds_before: list[int] = []
    outcomes: list[int] = []
    for u in uniforms:
        reds_before.append(red)
        drew_red = u < red / total
        outcomes.append(int(drew_red))
        red += drew_red
        total += 1
    greens_before = [spec.r0 + spec.b0 + i - r for i, r in enumerate(reds_before)]
    trajectory = UrnTrajectory(red=reds_before, green=greens_before)
    return np.asarray(outcomes, dtype=np.int64), trajectory


def gen_mixture(prior: PriorSpec, n: int, seed: int = 0) -> tuple[OutcomeSequence, float]:
    """Draw p once from the prior, then n i.i.d. Bernoulli(p) outcomes.

    Returns:
        Tuple of (outcomes, drawn p)
    """
    spec = ProcessSpec(kind=ProcessKind.MIXTURE, prior=prior, n=n, seed=seed)
    outcomes, drawn_p = _mixture_draws(spec)
    return _sequence(spec, outcomes), drawn_p


def _mixture_draws(spec: ProcessSpec) -> tuple[np.ndarray, float]:
    assert spec.prior is not None
    rng = make_rng(spec.seed, ProcessKind.MIXTURE.value)
    drawn_p = spec.prior.sample(rng)
    return (rng.random(spec.n) < drawn_p).astype(np.int64), drawn_p


def gen_deterministic(pattern: Sequence[int], n: int) -> OutcomeSequence:
    """Repeat pattern cyclically to length n (e.g. [1, 0] for alternating weather)."""
    spec = ProcessSpec(kind=ProcessKind.DETERMINISTIC, pattern=list(pattern), n=n)
    return _sequence(spec, _deterministic_draws(spec))


def _deterministic_draws(spec: ProcessSpec) -> np.ndarray:
    return np.resize(np.asarray(spec.pattern, dtype=np.int64), spec.n)


def gen_markov(
    p_one_after_zero: float,
    p_one_after_one: float,
    initial_p: float,
    n: int,
    seed: int = 0,
) -> OutcomeSequence:
    """
    Two-state Markov chain on {0, 1}.

    Args:
        p_one_after_zero: P(e_k = 1 | e_{k-1} = 0)
        p_one_after_one: P(e_k = 1 | e_{k-1} = 1)
        initial_p: P(e_1 = 1)

    Alternating weather is the limit p_one_after_zero=1, p_one_after_one=0.
    """
    spec = ProcessSpec(
        kind=ProcessKind.MARKOV,
        p_one_after_zero=p_one_after_zero,
        p_one_after_one=p_one_after_one,
        initial_p=initial_p,
        n=n,
        seed=seed,
    )
    return _sequence(spec, _markov_draws(spec))


def _markov_draws(spec: ProcessSpec) -> np.ndarray:
    assert spec.initial_p is not None
    uniforms = make_rng(spec.seed, ProcessKind.MARKOV.value).random(spec.n).tolist()
    transition = (spec.p_one_after_zero, spec.p_one_after_one)
    outcomes: list[int] = []
    previous = int(uniforms[0] < spec.initial_p)
    outcomes.append(previous)
    for u in uniforms[1:]:
        previous = int(u < transition[previous])  # type: ignore[operator]
        outcomes.append(previous)
    return np.asarray(outcomes, dtype=np.int64)


def gen_category(
    rates: Sequence[float],
    assignment_seed: int,
    n: int,
    seed: int = 0,
) -> tuple[OutcomeSequence, list[int]]:
    """
    Assign each step a category 1..9 uniformly, then draw Bernoulli(rate of category).

    The category stream depends only on assignment_seed, so the same individuals
    can be paired with different outcome draws.

    Returns:
        Tuple of (outcomes, category index per step)
    """
    spec = ProcessSpec(
        kind=ProcessKind.CATEGORY,
        rates=list(rates),
        assignment_seed=assignment_seed,
        n=n,
        seed=seed,
    )
    outcomes, categories = _category_draws(spec)
    return _sequence(spec, outcomes), categories.tolist()


def _category_draws(spec: ProcessSpec) -> tuple[np.ndarray, np.ndarray]:
    assert spec.rates is not None
    rates = np.asarray(spec.rates, dtype=np.float64)
    assignment = make_rng(spec.assignment_seed or 0, "category-assignment")
    categories = assignment.integers(1, rates.shape[0], size=spec.n, endpoint=True)
    u = make_rng(spec.seed, ProcessKind.CATEGORY.value).random(spec.n)
    return (u < rates[categories - 1]).astype(np.int64), categories


def gen_two_level(
    deep_rates: Sequence[float],
    weights: Sequence[float],
    coarse_value: float,
    n: int,
    seed: int = 0,
) -> tuple[OutcomeSequence, list[float]]:
    """
    Two-level risk process: a deep rate drawn per step, outcome Bernoulli(deep rate).

    The weighted average of the deep rates must equal coarse_value, the shallow
    risk every individual shares.

    Returns:
        Tuple of (outcomes, deep rate per step)
    """
    spec = ProcessSpec(
        kind=ProcessKind.TWO_LEVEL,
        deep_rates=list(deep_rates),
        weights=list(weights),
        coarse_value=coarse_value,
        n=n,
        seed=seed,
    )
    outcomes, deep = _two_level_draws(spec)
    return _sequence(spec, outcomes), deep.tolist()


def _two_level_draws(spec: ProcessSpec) -> tuple[np.ndarray, np.ndarray]:
    assert spec.deep_rates is not None and spec.weights is not None
    rates = np.asarray(spec.deep_rates, dtype=np.float64)
    weights = np.asarray(spec.weights, dtype=np.float64)
    rng = make_rng(spec.seed, ProcessKind.TWO_LEVEL.value)
    deep = rates[rng.choice(rates.shape[0], size=spec.n, p=weights / weights.sum())]
    return (rng.random(spec.n) < deep).astype(np.int64), deep


def generate(spec: ProcessSpec, quiet: bool = False) -> GeneratedProcess:
    """Run the generator for any ProcessSpec.

    Replicate loops pass quiet=True to skip the per-run log line.

    Example:
        process = generate(ProcessSpec(kind=ProcessKind.CATEGORY, rates=rates,
                                       assignment_seed=3, n=90_000, seed=1))
        info = process.information_base()
    """
    covariates: dict[str, list[float]] = {}
    trajectory: UrnTrajectory | None = None
    drawn_p: float | None = None

    if spec.kind == ProcessKind.BERNOULLI:
        outcomes = _bernoulli_draws(spec)
    elif spec.kind == ProcessKind.MIXTURE:
        outcomes, drawn_p = _mixture_draws(spec)
    elif spec.kind == ProcessKind.POLYA:
        outcomes, trajectory = _polya_draws(spec)
    elif spec.kind == ProcessKind.DETERMINISTIC:
        outcomes = _deterministic_draws(spec)
    elif spec.kind == ProcessKind.MARKOV:
        outcomes = _markov_draws(spec)
    elif spec.kind == ProcessKind.CATEGORY:
        outcomes, categories = _category_draws(spec)
        covariates[CATEGORY_COVARIATE] = categories.astype(np.float64).tolist()
    else:
        outcomes, deep = _two_level_draws(spec)
        covariates[DEEP_RATE_COVARIATE] = deep.tolist()

    sequence = _sequence(spec, outcomes)
    if not quiet:
        logger.info(
            f"Generated {spec.process_id}: n={spec.n}, seed={spec.seed}, "
            f"frequency={sequence.frequency():.4f}"
        )
    return GeneratedProcess(
        spec=spec,
        sequence=sequence,
        covariates=covariates,
        hidden_covariates=list(HIDDEN_COVARIATES.get(spec.kind, ())),
        trajectory=trajectory,
        drawn_p=drawn_p,
    )
