"""Selection rules choosing test subsets for calibration.

A rule is either static (all, every_mth, index_set), chosen without looking at
outcomes or background information, or a history predicate built from a small
declarative grammar whose clauses can only look backwards:

- step_modulo: k % modulus == remainder
- window: the w <= 8 outcomes ending at lag >= 1 before step k equal a pattern
- covariate: a covariate of step k equals a value
- forecast: p_k compared against a threshold (forecasts are H-based themselves)

Clauses in one predicate are conjoined. Every rule can be evaluated per step
(`contains`) or over a whole information base at once (`membership`); both read
only H_k and, for forecast clauses, p_k.

The grammar under-approximates "H-based" selection; it is decidable and
serialisable rather than a full computability-theoretic treatment.
"""

import operator
from collections.abc import Callable, Sequence
from enum import Enum
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.core.models import InformationBase, InformationRecord, Scenario
from src.exceptions import CriterionMismatchError, LookaheadRuleError, ValidationError

MAX_WINDOW = 8

# Valid operators for forecast threshold clauses
VALID_OPERATORS: dict[str, Callable[[Any, Any], Any]] = {
    "le": operator.le,
    "lt": operator.lt,
    "ge": operator.ge,
    "gt": operator.gt,
}


class RuleKind(str, Enum):
    """Kinds of selection rule."""

    ALL = "all"
    EVERY_MTH = "every_mth"
    INDEX_SET = "index_set"
    HISTORY_PREDICATE = "history_predicate"


class StepModuloClause(BaseModel):
    """Select steps with k % modulus == remainder (e.g. a weekday)."""

    model_config = ConfigDict(frozen=True)

    modulus: int = Field(..., ge=1)
    remainder: int = Field(..., ge=0)

    @model_validator(mode="after")
    def validate_remainder(self) -> "StepModuloClause":
        if self.remainder >= self.modulus:
            raise ValueError(f"remainder {self.remainder} must be < modulus {self.modulus}")
        return self


class WindowClause(BaseModel):
    """Select steps whose recent outcomes match a pattern.

    With pattern [a_1..a_w] and lag L, step k matches iff
    (e_{k-L-w+1}, ..., e_{k-L}) == (a_1, ..., a_w). Steps without enough
    history never match.
    """

    model_config = ConfigDict(frozen=True)

    pattern: list[int] = Field(..., min_length=1, max_length=MAX_WINDOW)
    lag: int = Field(default=1, description="Distance from step k to the newest outcome read")

    @field_validator("pattern")
    @classmethod
    def validate_pattern(cls, v: list[int]) -> list[int]:
        if any(a not in (0, 1) for a in v):
            raise ValueError(f"Window pattern must be binary, got {v}")
        return v

    @model_validator(mode="after")
    def validate_lag(self) -> "WindowClause":
        if self.lag < 1:
            raise LookaheadRuleError(rule_id=f"window{self.pattern}", lag=self.lag)
        return self

    @property
    def span(self) -> int:
        """Number of steps back the clause reaches."""
        return self.lag + len(self.pattern) - 1


class CovariateClause(BaseModel):
    """Select steps whose covariate equals a value."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., min_length=1)
    value: float = Field(...)


class ForecastClause(BaseModel):
    """Select steps by comparing p_k against a threshold."""

    model_config = ConfigDict(frozen=True)

    operator: str = Field(..., description="One of le, lt, ge, gt")
    threshold: float = Field(..., ge=0.0, le=1.0)

    @field_validator("operator")
    @classmethod
    def validate_operator(cls, v: str) -> str:
        if v not in VALID_OPERATORS:
            raise ValueError(f"Invalid operator '{v}'. Must be one of: {sorted(VALID_OPERATORS)}")
        return v

    def apply(self, value: Any) -> Any:
        return VALID_OPERATORS[self.operator](value, self.threshold)


class HistoryPredicate(BaseModel):
    """Conjunction of grammar clauses over (k, H_k, p_k)."""

    model_config = ConfigDict(frozen=True)

    step_modulo: StepModuloClause | None = None
    window: WindowClause | None = None
    covariates: list[CovariateClause] = Field(default_factory=list)
    forecast: ForecastClause | None = None

    @model_validator(mode="after")
    def validate_not_empty(self) -> "HistoryPredicate":
        if not (self.step_modulo or self.window or self.covariates or self.forecast):
            raise ValueError("A history predicate needs at least one clause")
        return self

    @property
    def uses_forecast(self) -> bool:
        return self.forecast is not None


class SelectionRule(BaseModel):
    """A predicate over (step, information record) choosing a test subset.

    Example:
        # "Tuesdays when it had rained on both previous days"
        rule = SelectionRule.history(
            "wet-tuesdays",
            step_modulo=StepModuloClause(modulus=7, remainder=2),
            window=WindowClause(pattern=[1, 1]),
        )
        assert rule.h_based
    """

    model_config = ConfigDict(frozen=True)

    rule_id: str = Field(..., min_length=1)
    kind: RuleKind = Field(...)
    m: int | None = Field(default=None, ge=1, description="Period for every_mth")
    offset: int = Field(default=0, ge=0, description="Residue for every_mth")
    indices: list[int] = Field(default_factory=list, description="1-based steps for index_set")
    predicate: HistoryPredicate | None = None

    @field_validator("indices")
    @classmethod
    def validate_indices(cls, v: list[int]) -> list[int]:
        if any(i < 1 for i in v):
            raise ValueError("Index-set steps are 1-based")
        return sorted(set(v))

    @model_validator(mode="after")
    def validate_kind_fields(self) -> "SelectionRule":
        if self.kind == RuleKind.EVERY_MTH and self.m is None:
            raise ValueError("every_mth rules need m")
        if self.kind == RuleKind.HISTORY_PREDICATE and self.predicate is None:
            raise ValueError("history_predicate rules need a predicate")
        if self.kind != RuleKind.HISTORY_PREDICATE and self.predicate is not None:
            raise ValueError(f"{self.kind.value} rules take no predicate")
        return self

    # -- constructors ---------------------------------------------------------

    @classmethod
    def all_steps(cls, rule_id: str = "all") -> "SelectionRule":
        return cls(rule_id=rule_id, kind=RuleKind.ALL)

    @classmethod
    def every_mth(cls, m: int, offset: int = 0, rule_id: str | None = None) -> "SelectionRule":
        return cls(
            rule_id=rule_id or f"every_{m}_{offset}", kind=RuleKind.EVERY_MTH, m=m, offset=offset
        )

    @classmethod
    def index_set(cls, indices: Sequence[int], rule_id: str = "index_set") -> "SelectionRule":
        return cls(rule_id=rule_id, kind=RuleKind.INDEX_SET, indices=list(indices))

    @classmethod
    def history(cls, rule_id: str, **clauses: Any) -> "SelectionRule":
        return cls(
            rule_id=rule_id,
            kind=RuleKind.HISTORY_PREDICATE,
            predicate=HistoryPredicate(**clauses),
        )

    # -- classification -------------------------------------------------------

    @property
    def h_based(self) -> bool:
        """True for rules that read the information base (not static)."""
        return self.kind == RuleKind.HISTORY_PREDICATE

    @property
    def uses_forecast(self) -> bool:
        return self.predicate is not None and self.predicate.uses_forecast

    # -- evaluation -----------------------------------------------------------

    def contains(self, record: InformationRecord, forecast: float | None = None) -> bool:
        """Decide membership of step record.step from H_k (and p_k when needed)."""
        k = record.step
        if self.kind == RuleKind.ALL:
            return True
        if self.kind == RuleKind.EVERY_MTH:
            assert self.m is not None
            return k % self.m == self.offset % self.m
        if self.kind == RuleKind.INDEX_SET:
            return k in self.indices

        predicate = self._require_predicate()
        modulo = predicate.step_modulo
        if modulo and k % modulo.modulus != modulo.remainder:
            return False
        if predicate.window:
            self._check_window_scenario(record.scenario)
            window = predicate.window
            start = k - window.lag - len(window.pattern)
            if start < 0:
                return False
            recent = record.outcome_history[start : k - window.lag]
            if [int(v) for v in recent] != window.pattern:
                return False
        for clause in predicate.covariates:
            if clause.name not in record.covariates:
                raise self._missing_covariate(clause.name)
            if float(record.covariates[clause.name]) != clause.value:
                return False
        if predicate.forecast:
            if forecast is None:
                raise self._missing_forecasts()
            if not predicate.forecast.apply(forecast):
                return False
        return True

    def membership(
        self, info: InformationBase, forecasts: np.ndarray | Sequence[float] | None = None
    ) -> np.ndarray:
        """Boolean membership mask over steps 1..N (index k-1 is step k)."""
        n = info.n
        steps = np.arange(1, n + 1)
        if self.kind == RuleKind.ALL:
            return np.ones(n, dtype=bool)
        if self.kind == RuleKind.EVERY_MTH:
            assert self.m is not None
            return steps % self.m == self.offset % self.m
        if self.kind == RuleKind.INDEX_SET:
            return np.isin(steps, self.indices)

        predicate = self._require_predicate()
        mask = np.ones(n, dtype=bool)
        if predicate.step_modulo:
            mask &= steps % predicate.step_modulo.modulus == predicate.step_modulo.remainder
        if predicate.window:
            self._check_window_scenario(info.scenario)
            mask &= _window_mask(info.outcome_array, predicate.window)
        for clause in predicate.covariates:
            if clause.name not in info.covariates:
                raise self._missing_covariate(clause.name)
            mask &= info.covariate_array(clause.name) == clause.value
        if predicate.forecast:
            if forecasts is None:
                raise self._missing_forecasts()
            p = np.asarray(forecasts, dtype=np.float64)
            if p.shape != (n,):
                raise ValidationError(
                    f"Rule '{self.rule_id}' got {p.shape[0]} forecasts for {n} steps"
                )
            mask &= predicate.forecast.apply(p)
        return mask

    # -- helpers --------------------------------------------------------------

    def _require_predicate(self) -> HistoryPredicate:
        if self.predicate is None:
            raise ValidationError(f"Rule '{self.rule_id}' has no predicate")
        return self.predicate

    def _check_window_scenario(self, scenario: Scenario) -> None:
        if scenario == Scenario.INDEPENDENCE:
            raise CriterionMismatchError(
                self.rule_id, "h_based", "window clauses need the sequential scenario"
            )

    def _missing_covariate(self, name: str) -> CriterionMismatchError:
        return CriterionMismatchError(
            self.rule_id, "h_based", f"covariate '{name}' is not in the information base"
        )

    def _missing_forecasts(self) -> CriterionMismatchError:
        return CriterionMismatchError(self.rule_id, "h_based", "forecast clause needs p_k")


def _window_mask(outcomes: np.ndarray, window: WindowClause) -> np.ndarray:
    """Vectorised window match; position i (step i+1) reads only e at indices <= i - lag."""
    n = outcomes.shape[0]
    mask = np.zeros(n, dtype=bool)
    start = window.span
    if start >= n:
        return mask
    matched = np.ones(n - start, dtype=bool)
    for j, value in enumerate(window.pattern):
        shift = window.span - j
        matched &= outcomes[start - shift : n - shift] == value
    mask[start:] = matched
    return mask
