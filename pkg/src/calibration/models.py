"""Calibration data models.

This module defines:
- BinSpec: forecast-value bins for probability calibration
- BrierDecomposition: Brier score split into reliability, resolution and uncertainty
"""

import math

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, model_validator

from src.exceptions import ValidationError

DEFAULT_BIN_WIDTH = 0.05
DEFAULT_MIN_COUNT = 30
DEFAULT_SIGNIFICANCE = 0.01


class BinSpec(BaseModel):
    """Equal-width bins over [0, 1] for grouping forecasts of (nearly) equal value.

    Bin i covers [i*width, (i+1)*width); the last bin is closed so p = 1 falls in it.

    Example:
        bins = BinSpec(width=0.05, min_count=30)
        bins.nbins  # 20
    """

    model_config = ConfigDict(frozen=True)

    width: float = Field(default=DEFAULT_BIN_WIDTH, gt=0.0, le=1.0, description="Bin width delta")
    min_count: int = Field(
        default=DEFAULT_MIN_COUNT, ge=1, description="Minimum members for a verdict"
    )

    @model_validator(mode="after")
    def validate_width(self) -> "BinSpec":
        inverse = 1.0 / self.width
        if abs(inverse - round(inverse)) > 1e-9:
            raise ValidationError(
                f"Bin width {self.width} does not divide [0, 1] evenly; 1/width must be an integer",
                details={"width": self.width},
            )
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def nbins(self) -> int:
        return int(round(1.0 / self.width))

    def bin_index(self, forecasts: np.ndarray) -> np.ndarray:
        """Bin of each forecast: floor(p * nbins), clipped to the last bin.

        The product is rounded to 9 decimals first so 0.29 * 100 = 28.999999999999996
        stays in bin 29.
        """
        scaled = np.round(np.asarray(forecasts, dtype=np.float64) * self.nbins, 9)
        index = np.floor(scaled).astype(np.int64)
        return np.clip(index, 0, self.nbins - 1)

    def label(self, index: int) -> str:
        lower, upper = index / self.nbins, (index + 1) / self.nbins
        close = "]" if index == self.nbins - 1 else ")"
        return f"[{lower:g},{upper:g}{close}"


class BrierDecomposition(BaseModel):
    """Brier score with its reliability/resolution/uncertainty decomposition over bins.

    brier_score is the direct mean squared error; reliability - resolution +
    uncertainty equals it exactly when forecasts are constant within each bin.
    """

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    nbins: int = Field(..., ge=1)
    brier_score: float
    reliability: float
    resolution: float
    uncertainty: float

    @computed_field  # type: ignore[prop-decorator]
    @property
    def skill_score(self) -> float | None:
        """(resolution - reliability) / uncertainty; None when outcomes never vary."""
        if self.uncertainty == 0.0:
            return None
        return (self.resolution - self.reliability) / self.uncertainty

    @property
    def decomposed_score(self) -> float:
        return math.fsum((self.reliability, -self.resolution, self.uncertainty))
