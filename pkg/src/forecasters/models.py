"""Forecaster data models.

This module defines:
- ForecasterKind: the built-in forecasters
- ForecasterSpec: serialisable forecaster configuration
- ForecasterState: explicit sequential state threaded through forecast_next
- ForecasterCheckpoint: snapshot of a partially completed sequential run
"""

import math
from datetime import datetime, timezone
from enum import Enum
from typing import Any
from uuid import uuid4

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.exceptions import InvalidForecasterSpecError
from src.processes.models import CATEGORY_COUNT, PriorKind, PriorSpec

UTC = timezone.utc

DEFAULT_CATEGORY_COVARIATE = "category"


class ForecasterKind(str, Enum):
    """Built-in sequential forecasters.

    Attributes:
        CONSTANT: Always announces c
        CLIMATOLOGY: Past frequency blended with 0.5 by prior_weight pseudo-trials
        LAPLACE: Rule of succession (s+1)/(k+1)
        POLYA_PREDICTIVE: Pólya urn predictive (r0+s)/(r0+b0+k-1)
        ORACLE: Announces the outcome itself; NOT H-based
        CATEGORY: Looks up the rate of the step's category covariate
        BAYES_MIXTURE: Posterior mean under a beta prior
        TRANSITION_LAPLACE: Rule of succession conditioned on the previous outcome
        COVARIATE_RATE: Announces the value of a named covariate
    """

    CONSTANT = "constant"
    CLIMATOLOGY = "climatology"
    LAPLACE = "laplace"
    POLYA_PREDICTIVE = "polya_predictive"
    ORACLE = "oracle"
    CATEGORY = "category"
    BAYES_MIXTURE = "bayes_mixture"
    TRANSITION_LAPLACE = "transition_laplace"
    COVARIATE_RATE = "covariate_rate"


class ForecasterSpec(BaseModel):
    """Configuration of one forecaster.

    Only the parameters of the chosen kind are used.

    Example:
        ForecasterSpec(kind=ForecasterKind.CONSTANT, c=0.5)
        ForecasterSpec(kind=ForecasterKind.BAYES_MIXTURE, prior=PriorSpec.beta(2, 2))
    """

    model_config = ConfigDict(frozen=True)

    kind: ForecasterKind = Field(...)
    c: float | None = Field(default=None, description="Constant forecast")
    prior_weight: float | None = Field(default=None, description="Pseudo-trials at 0.5")
    r0: int | None = Field(default=None, description="Initial red count")
    b0: int | None = Field(default=None, description="Initial green count")
    rate_table: list[float] | None = Field(default=None, description="Rate per category 1..9")
    prior: PriorSpec | None = Field(default=None, description="Beta prior for bayes_mixture")
    covariate: str | None = Field(default=None, description="Covariate read by the forecaster")
    label: str | None = Field(default=None, description="Optional forecaster_id override")

    @model_validator(mode="after")
    def validate_kind_parameters(self) -> "ForecasterSpec":
        kind = self.kind.value
        if self.kind == ForecasterKind.CONSTANT:
            if self.c is None or not math.isfinite(self.c) or not 0.0 <= self.c <= 1.0:
                raise InvalidForecasterSpecError(kind, f"c must lie in [0, 1], got {self.c}")
        elif self.kind == ForecasterKind.CLIMATOLOGY:
            weight = self.prior_weight
            if weight is None or not math.isfinite(weight) or weight < 0:
                raise InvalidForecasterSpecError(
                    kind, f"prior_weight must be >= 0, got {self.prior_weight}"
                )
        elif self.kind == ForecasterKind.POLYA_PREDICTIVE:
            if self.r0 is None or self.b0 is None or self.r0 < 1 or self.b0 < 1:
                raise InvalidForecasterSpecError(
                    kind, f"initial counts must be >= 1, got r0={self.r0}, b0={self.b0}"
                )
        elif self.kind == ForecasterKind.CATEGORY:
            table = self.rate_table
            if table is None or len(table) != CATEGORY_COUNT:
                raise InvalidForecasterSpecError(
                    kind,
                    f"rate_table needs {CATEGORY_COUNT} rates, "
                    f"got {None if table is None else len(table)}",
                )
            if not all(math.isfinite(r) and 0.0 <= r <= 1.0 for r in table):
                raise InvalidForecasterSpecError(kind, f"rates must lie in [0, 1], got {table}")
        elif self.kind == ForecasterKind.BAYES_MIXTURE:
            if self.prior is None or self.prior.kind == PriorKind.POINT:
                raise InvalidForecasterSpecError(kind, "a uniform01 or beta prior is required")
        elif self.kind == ForecasterKind.COVARIATE_RATE:
            if not self.covariate:
                raise InvalidForecasterSpecError(kind, "covariate name is required")
        return self

    # -- convenience constructors --------------------------------------------

    @classmethod
    def constant(cls, c: float) -> "ForecasterSpec":
        return cls(kind=ForecasterKind.CONSTANT, c=c)

    @classmethod
    def climatology(cls, prior_weight: float = 0.0) -> "ForecasterSpec":
        return cls(kind=ForecasterKind.CLIMATOLOGY, prior_weight=prior_weight)

    @classmethod
    def laplace(cls) -> "ForecasterSpec":
        return cls(kind=ForecasterKind.LAPLACE)

    @classmethod
    def polya_predictive(cls, r0: int = 1, b0: int = 1) -> "ForecasterSpec":
        return cls(kind=ForecasterKind.POLYA_PREDICTIVE, r0=r0, b0=b0)

    @classmethod
    def oracle(cls) -> "ForecasterSpec":
        return cls(kind=ForecasterKind.ORACLE)

    @classmethod
    def category(cls, rate_table: list[float], covariate: str | None = None) -> "ForecasterSpec":
        return cls(kind=ForecasterKind.CATEGORY, rate_table=rate_table, covariate=covariate)

    @classmethod
    def bayes_mixture(cls, prior: PriorSpec) -> "ForecasterSpec":
        return cls(kind=ForecasterKind.BAYES_MIXTURE, prior=prior)

    @classmethod
    def transition_laplace(cls) -> "ForecasterSpec":
        return cls(kind=ForecasterKind.TRANSITION_LAPLACE)

    @classmethod
    def covariate_rate(cls, covariate: str) -> "ForecasterSpec":
        return cls(kind=ForecasterKind.COVARIATE_RATE, covariate=covariate)

    # -- derived properties ---------------------------------------------------

    @property
    def h_based(self) -> bool:
        """Every kind except the oracle reads only the information record."""
        return self.kind != ForecasterKind.ORACLE

    @property
    def covariate_name(self) -> str | None:
        if self.kind == ForecasterKind.CATEGORY:
            return self.covariate or DEFAULT_CATEGORY_COVARIATE
        if self.kind == ForecasterKind.COVARIATE_RATE:
            return self.covariate
        return None

    @property
    def beta_counts(self) -> tuple[float, float] | None:
        """Pseudo-counts (a, b) of frequency-based kinds: p = (s + a) / (t + a + b)."""
        if self.kind == ForecasterKind.LAPLACE:
            return (1, 1)
        if self.kind == ForecasterKind.POLYA_PREDICTIVE:
            assert self.r0 is not None and self.b0 is not None
            return (self.r0, self.b0)
        if self.kind == ForecasterKind.CLIMATOLOGY:
            assert self.prior_weight is not None
            return (self.prior_weight / 2, self.prior_weight / 2)
        if self.kind == ForecasterKind.BAYES_MIXTURE:
            assert self.prior is not None
            return self.prior.shape
        return None

    @property
    def forecaster_id(self) -> str:
        if self.label:
            return self.label
        if self.kind == ForecasterKind.CONSTANT:
            return f"constant({self.c})"
        if self.kind == ForecasterKind.CLIMATOLOGY:
            return f"climatology({self.prior_weight})"
        if self.kind == ForecasterKind.POLYA_PREDICTIVE:
            return f"polya_predictive({self.r0},{self.b0})"
        if self.kind == ForecasterKind.BAYES_MIXTURE:
            assert self.prior is not None
            return f"bayes_mixture({self.prior.label()})"
        if self.kind == ForecasterKind.COVARIATE_RATE:
            return f"covariate_rate({self.covariate})"
        return self.kind.value


class ForecasterState(BaseModel):
    """Counts a frequency-based forecaster has absorbed.

    The state may lag one step behind the information record: before forecasting
    step k it holds either k-1 outcomes, or k-2 and absorbs e_{k-1} from the record.

    Attributes:
        trials: Outcomes absorbed
        successes: Ones among them
        transitions: transitions[i][j] counts consecutive pairs (i, j)
        last_outcome: Most recent absorbed outcome
    """

    model_config = ConfigDict(frozen=True)

    trials: int = Field(default=0, ge=0)
    successes: int = Field(default=0, ge=0)
    transitions: list[list[int]] = Field(default_factory=lambda: [[0, 0], [0, 0]])
    last_outcome: int | None = Field(default=None, ge=0, le=1)

    @model_validator(mode="after")
    def validate_counts(self) -> "ForecasterState":
        if self.successes > self.trials:
            raise ValueError(f"successes {self.successes} exceed trials {self.trials}")
        if len(self.transitions) != 2 or any(len(row) != 2 for row in self.transitions):
            raise ValueError("transitions must be a 2x2 table")
        return self

    def absorb(self, outcome: int) -> "ForecasterState":
        transitions = [list(row) for row in self.transitions]
        if self.last_outcome is not None:
            transitions[self.last_outcome][outcome] += 1
        # counts stay consistent by construction
        return ForecasterState.model_construct(
            trials=self.trials + 1,
            successes=self.successes + outcome,
            transitions=transitions,
            last_outcome=outcome,
        )


class ForecasterCheckpoint(BaseModel):
    """Snapshot of a sequential forecasting run after `step` forecasts.

    Example:
        checkpoint = ForecasterCheckpoint.from_state(run_id, spec, state, forecasts)
        state, forecasts = checkpoint.to_state()
    """

    checkpoint_id: str = Field(
        default_factory=lambda: f"checkpoint-{uuid4().hex[:16]}",
        description="Unique identifier for this checkpoint",
    )
    run_id: str = Field(..., description="Run this checkpoint belongs to")
    step: int = Field(..., ge=0, description="Forecasts issued so far")
    forecaster: ForecasterSpec
    state_snapshot: dict[str, Any] = Field(..., description="Serialized ForecasterState")
    forecasts: list[float] = Field(default_factory=list)
    created_at: str = Field(default_factory=lambda: datetime.now(UTC).isoformat())

    @classmethod
    def from_state(
        cls,
        run_id: str,
        forecaster: ForecasterSpec,
        state: ForecasterState,
        forecasts: list[float],
    ) -> "ForecasterCheckpoint":
        return cls(
            run_id=run_id,
            step=len(forecasts),
            forecaster=forecaster,
            state_snapshot=state.model_dump(),
            forecasts=list(forecasts),
        )

    def to_state(self) -> tuple[ForecasterState, list[float]]:
        return ForecasterState(**self.state_snapshot), list(self.forecasts)
