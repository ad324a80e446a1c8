"""Seeded outcome-generating processes and exact oracles."""

from src.processes.generators import (
    CATEGORY_COVARIATE,
    DEEP_RATE_COVARIATE,
    HIDDEN_COVARIATES,
    gen_bernoulli,
    gen_category,
    gen_deterministic,
    gen_markov,
    gen_mixture,
    gen_polya,
    gen_two_level,
    generate,
)
from src.processes.models import (
    GeneratedProcess,
    PriorKind,
    PriorSpec,
    ProcessKind,
    ProcessSpec,
    UrnState,
    UrnTrajectory,
)
from src.processes.oracles import (
    mixture_sequence_prob,
    polya_sequence_logprob,
    polya_sequence_prob,
    uniform_mixture_prob,
)
from src.processes.rng import derive_seed, make_rng, replicate_seeds

__all__ = [
    "CATEGORY_COVARIATE",
    "DEEP_RATE_COVARIATE",
    "HIDDEN_COVARIATES",
    "GeneratedProcess",
    "PriorKind",
    "PriorSpec",
    "ProcessKind",
    "ProcessSpec",
    "UrnState",
    "UrnTrajectory",
    "derive_seed",
    "gen_bernoulli",
    "gen_category",
    "gen_deterministic",
    "gen_markov",
    "gen_mixture",
    "gen_polya",
    "gen_two_level",
    "generate",
    "make_rng",
    "mixture_sequence_prob",
    "polya_sequence_logprob",
    "polya_sequence_prob",
    "replicate_seeds",
    "uniform_mixture_prob",
]
