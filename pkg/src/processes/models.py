"""Process data models.

This module defines:
- ProcessSpec: serialisable description of an outcome-generating process
- PriorSpec: prior over the Bernoulli parameter for mixture processes
- UrnState / UrnTrajectory: Pólya urn contents before each draw
- GeneratedProcess: outcomes plus covariate streams and provenance
"""

import math
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.core.models import UINT64_MAX, InformationBase, OutcomeSequence, Scenario
from src.exceptions import InvalidProcessSpecError

CATEGORY_COUNT = 9
AVERAGE_TOLERANCE = 1e-12


def _is_probability(value: float | None) -> bool:
    return value is not None and math.isfinite(value) and 0.0 <= value <= 1.0


# =============================================================================
# Priors
# =============================================================================


class PriorKind(str, Enum):
    """Priors over the Bernoulli parameter p."""

    UNIFORM01 = "uniform01"
    POINT = "point"
    BETA = "beta"


class PriorSpec(BaseModel):
    """Prior for mixture processes and Bayes-mixture forecasters.

    Example:
        PriorSpec(kind=PriorKind.BETA, a=2.0, b=2.0)
    """

    model_config = ConfigDict(frozen=True)

    kind: PriorKind = Field(...)
    p: float | None = Field(default=None, description="Atom location for point priors")
    a: float | None = Field(default=None, description="Beta shape for successes")
    b: float | None = Field(default=None, description="Beta shape for failures")

    @model_validator(mode="after")
    def validate_parameters(self) -> "PriorSpec":
        if self.kind == PriorKind.POINT and not _is_probability(self.p):
            raise InvalidProcessSpecError("mixture", f"point prior needs p in [0, 1], got {self.p}")
        if self.kind == PriorKind.BETA:
            for name, value in (("a", self.a), ("b", self.b)):
                if value is None or not math.isfinite(value) or value <= 0:
                    raise InvalidProcessSpecError(
                        "mixture", f"beta prior needs {name} > 0, got {value}"
                    )
        return self

    @classmethod
    def uniform(cls) -> "PriorSpec":
        return cls(kind=PriorKind.UNIFORM01)

    @classmethod
    def point(cls, p: float) -> "PriorSpec":
        return cls(kind=PriorKind.POINT, p=p)

    @classmethod
    def beta(cls, a: float, b: float) -> "PriorSpec":
        return cls(kind=PriorKind.BETA, a=a, b=b)

    @property
    def shape(self) -> tuple[float, float] | None:
        """Beta shape (a, b); uniform is Beta(1, 1), point priors have none."""
        if self.kind == PriorKind.UNIFORM01:
            return (1.0, 1.0)
        if self.kind == PriorKind.BETA:
            assert self.a is not None and self.b is not None
            return (self.a, self.b)
        return None

    @property
    def mean(self) -> float:
        if self.kind == PriorKind.POINT:
            assert self.p is not None
            return self.p
        a, b = self.shape  # type: ignore[misc]
        return a / (a + b)

    def sample(self, rng: np.random.Generator) -> float:
        if self.kind == PriorKind.POINT:
            assert self.p is not None
            return self.p
        if self.kind == PriorKind.UNIFORM01:
            return float(rng.random())
        a, b = self.shape  # type: ignore[misc]
        return float(rng.beta(a, b))

    def label(self) -> str:
        if self.kind == PriorKind.POINT:
            return f"point({self.p})"
        if self.kind == PriorKind.BETA:
            return f"beta({self.a},{self.b})"
        return "uniform01"


# =============================================================================
# Pólya urn
# =============================================================================


class UrnState(BaseModel):
    """Urn contents: red (successes) and green (failures) ball counts."""

    model_config = ConfigDict(frozen=True)

    red: int = Field(..., ge=1)
    green: int = Field(..., ge=1)

    @property
    def red_probability(self) -> float:
        return self.red / (self.red + self.green)

    def after(self, drew_red: bool) -> "UrnState":
        """State after replacing the drawn ball plus one of the same colour."""
        if drew_red:
            return UrnState(red=self.red + 1, green=self.green)
        return UrnState(red=self.red, green=self.green + 1)


class UrnTrajectory(BaseModel):
    """Urn counts recorded before each draw (index k-1 is before draw k)."""

    model_config = ConfigDict(frozen=True)

    red: list[int] = Field(default_factory=list)
    green: list[int] = Field(default_factory=list)

    def __len__(self) -> int:
        return len(self.red)

    def state(self, step: int) -> UrnState:
        return UrnState(red=self.red[step - 1], green=self.green[step - 1])

    def red_probabilities(self) -> list[float]:
        return [r / (r + g) for r, g in zip(self.red, self.green, strict=True)]


# =============================================================================
# Process specification
# =============================================================================


class ProcessKind(str, Enum):
    """Outcome-generating processes."""

    BERNOULLI = "bernoulli"
    MIXTURE = "mixture"
    POLYA = "polya"
    DETERMINISTIC = "deterministic"
    MARKOV = "markov"
    CATEGORY = "category"
    TWO_LEVEL = "two_level"


class ProcessSpec(BaseModel):
    """Serialisable description of a process plus its length and seed.

    Only the parameters of the chosen kind are used; the rest stay None.

    Example:
        spec = ProcessSpec(kind=ProcessKind.POLYA, r0=1, b0=1, n=10_000, seed=7)
    """

    model_config = ConfigDict(frozen=True)

    kind: ProcessKind = Field(...)
    n: int = Field(..., ge=1, description="Sequence length")
    seed: int = Field(default=0, ge=0, le=UINT64_MAX)

    # bernoulli
    p: float | None = None
    # mixture
    prior: PriorSpec | None = None
    # polya
    r0: int | None = None
    b0: int | None = None
    # deterministic
    pattern: list[int] | None = None
    # markov: P(e_k = 1 | e_{k-1} = 0), P(e_k = 1 | e_{k-1} = 1), P(e_1 = 1)
    p_one_after_zero: float | None = None
    p_one_after_one: float | None = None
    initial_p: float | None = None
    # category
    rates: list[float] | None = None
    assignment_seed: int | None = Field(default=None, ge=0, le=UINT64_MAX)
    # two_level
    deep_rates: list[float] | None = None
    weights: list[float] | None = None
    coarse_value: float | None = None

    @model_validator(mode="after")
    def validate_kind_parameters(self) -> "ProcessSpec":
        kind = self.kind.value
        if self.kind == ProcessKind.BERNOULLI:
            if not _is_probability(self.p):
                raise InvalidProcessSpecError(kind, f"p must lie in [0, 1], got {self.p}")
        elif self.kind == ProcessKind.MIXTURE:
            if self.prior is None:
                raise InvalidProcessSpecError(kind, "prior is required")
        elif self.kind == ProcessKind.POLYA:
            if self.r0 is None or self.b0 is None or self.r0 < 1 or self.b0 < 1:
                raise InvalidProcessSpecError(
                    kind, f"initial counts must be >= 1, got r0={self.r0}, b0={self.b0}"
                )
        elif self.kind == ProcessKind.DETERMINISTIC:
            if not self.pattern:
                raise InvalidProcessSpecError(kind, "pattern must be non-empty")
            if any(v not in (0, 1) for v in self.pattern):
                raise InvalidProcessSpecError(kind, f"pattern must be binary, got {self.pattern}")
        elif self.kind == ProcessKind.MARKOV:
            for name in ("p_one_after_zero", "p_one_after_one", "initial_p"):
                if not _is_probability(getattr(self, name)):
                    raise InvalidProcessSpecError(kind, f"{name} must lie in [0, 1]")
        elif self.kind == ProcessKind.CATEGORY:
            self._validate_category()
        elif self.kind == ProcessKind.TWO_LEVEL:
            self._validate_two_level()
        return self

    def _validate_category(self) -> None:
        if self.rates is None or len(self.rates) != CATEGORY_COUNT:
            found = None if self.rates is None else len(self.rates)
            raise InvalidProcessSpecError(
                "category", f"expected {CATEGORY_COUNT} category rates, got {found}"
            )
        if not all(_is_probability(r) for r in self.rates):
            raise InvalidProcessSpecError("category", f"rates must lie in [0, 1], got {self.rates}")

    def _validate_two_level(self) -> None:
        deep, weights = self.deep_rates, self.weights
        if not deep or weights is None or len(deep) != len(weights):
            raise InvalidProcessSpecError("two_level", "deep_rates and weights must align")
        if not all(_is_probability(r) for r in deep):
            raise InvalidProcessSpecError("two_level", f"deep rates must lie in [0, 1], got {deep}")
        if any(w <= 0 or not math.isfinite(w) for w in weights):
            raise InvalidProcessSpecError("two_level", f"weights must be positive, got {weights}")
        if not _is_probability(self.coarse_value):
            raise InvalidProcessSpecError("two_level", "coarse_value must lie in [0, 1]")
        total = math.fsum(weights)
        average = math.fsum(r * w for r, w in zip(deep, weights, strict=True)) / total
        assert self.coarse_value is not None
        if abs(average - self.coarse_value) > AVERAGE_TOLERANCE:
            raise InvalidProcessSpecError(
                "two_level",
                f"weighted average of deep rates is {average!r}, coarse value is "
                f"{self.coarse_value!r}",
            )

    @property
    def process_id(self) -> str:
        """Stable label naming the kind and its parameters."""
        if self.kind == ProcessKind.BERNOULLI:
            return f"bernoulli(p={self.p})"
        if self.kind == ProcessKind.MIXTURE:
            assert self.prior is not None
            return f"mixture({self.prior.label()})"
        if self.kind == ProcessKind.POLYA:
            return f"polya(r0={self.r0},b0={self.b0})"
        if self.kind == ProcessKind.DETERMINISTIC:
            return "deterministic(" + "".join(str(v) for v in self.pattern or []) + ")"
        if self.kind == ProcessKind.MARKOV:
            return (
                f"markov(p01={self.p_one_after_zero},p11={self.p_one_after_one},"
                f"p1={self.initial_p})"
            )
        if self.kind == ProcessKind.CATEGORY:
            return f"category(assignment_seed={self.assignment_seed or 0})"
        return f"two_level(coarse={self.coarse_value})"


class GeneratedProcess(BaseModel):
    """Outcomes produced by a process together with everything recorded alongside them.

    Attributes:
        covariates: Streams aligned to steps (category index, deep rate, ...)
        hidden_covariates: Names of streams outside the forecaster's information base H
        trajectory: Urn counts before each draw (Pólya only)
        drawn_p: Parameter drawn from the prior (mixture only)
    """

    model_config = ConfigDict(frozen=True)

    spec: ProcessSpec
    sequence: OutcomeSequence
    covariates: dict[str, list[float]] = Field(default_factory=dict)
    hidden_covariates: list[str] = Field(default_factory=list)
    trajectory: UrnTrajectory | None = None
    drawn_p: float | None = None

    def information_base(
        self,
        include_hidden: bool = False,
        scenario: Scenario = Scenario.SEQUENTIAL,
    ) -> InformationBase:
        """Information base H (or the deeper K when include_hidden is True)."""
        covariates: dict[str, Any] = {
            name: stream
            for name, stream in self.covariates.items()
            if include_hidden or name not in self.hidden_covariates
        }
        return InformationBase(
            outcomes=self.sequence.outcomes, covariates=covariates, scenario=scenario
        )
