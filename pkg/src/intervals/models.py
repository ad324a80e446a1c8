"""Interval data models."""

from decimal import ROUND_HALF_UP, Decimal

from pydantic import BaseModel, ConfigDict, Field, model_validator


def round_half_away(value: float, digits: int = 2) -> float:
    """Round to `digits` decimals, halves away from zero (0.125 -> 0.13)."""
    quantum = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(value)).quantize(quantum, rounding=ROUND_HALF_UP))


class IntervalResult(BaseModel):
    """Confidence interval for a binomial proportion.

    Example:
        result = wilson_interval(0.75, 100)
        result.rounded()  # (0.66, 0.82)
    """

    model_config = ConfigDict(frozen=True)

    p_hat: float = Field(..., ge=0.0, le=1.0, description="Observed proportion")
    n: int = Field(..., ge=1, description="Number of trials")
    confidence: float = Field(..., gt=0.0, lt=1.0)
    lower: float = Field(..., ge=0.0, le=1.0)
    upper: float = Field(..., ge=0.0, le=1.0)
    z: float = Field(..., gt=0.0, description="Normal quantile used")
    method: str = Field(default="wilson")

    @model_validator(mode="after")
    def validate_order(self) -> "IntervalResult":
        if self.lower > self.upper:
            raise ValueError(f"lower {self.lower} exceeds upper {self.upper}")
        return self

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def rounded(self, digits: int = 2) -> tuple[float, float]:
        return (round_half_away(self.lower, digits), round_half_away(self.upper, digits))

    def to_row(self, digits: int = 2) -> dict[str, float | int | str]:
        lower, upper = self.rounded(digits)
        return {
            "p_hat": self.p_hat,
            "n": self.n,
            "conf": self.confidence,
            "lower": lower,
            "upper": upper,
            "method": self.method,
        }


class PointMass(BaseModel):
    """One atom of a discrete distribution."""

    model_config = ConfigDict(frozen=True)

    value: float
    mass: float = Field(..., ge=0.0, le=1.0)


class SingleTrialReport(BaseModel):
    """The exact law of a single trial's success rate next to a Wilson interval misapplied to it."""

    model_config = ConfigDict(frozen=True)

    p: float = Field(..., ge=0.0, le=1.0)
    distribution: list[PointMass]
    wilson: IntervalResult
    label: str = Field(default="critique exhibit")
    note: str = Field(default="")

    @property
    def support(self) -> list[float]:
        """Values carrying positive mass."""
        return [atom.value for atom in self.distribution if atom.mass > 0.0]
