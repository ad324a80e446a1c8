"""Brier score and its binned decomposition."""

import math

import numpy as np

from src.calibration.models import BinSpec, BrierDecomposition
from src.core.models import ValidatedRun
from src.exceptions import EmptyRunError


def brier_decomposition(run: ValidatedRun, bins: BinSpec | None = None) -> BrierDecomposition:
    """
    Brier score split into reliability, resolution and uncertainty.

    Uses the same bins as probability_calibration; reliability is the
    count-weighted mean squared gap between each bin's mean forecast and its
    outcome frequency.
    """
    if run.n == 0:
        raise EmptyRunError("run")
    bins = bins or BinSpec()
    e = run.e.astype(np.float64)
    p = run.p
    climatology = math.fsum(e.tolist()) / run.n

    index = bins.bin_index(p)
    counts = np.bincount(index, minlength=bins.nbins)
    occupied = counts > 0
    mean_forecast = np.bincount(index, weights=p, minlength=bins.nbins)[occupied] / counts[occupied]
    frequency = np.bincount(index, weights=e, minlength=bins.nbins)[occupied] / counts[occupied]
    weights = counts[occupied]

    reliability = math.fsum((weights * (mean_forecast - frequency) ** 2).tolist()) / run.n
    resolution = math.fsum((weights * (frequency - climatology) ** 2).tolist()) / run.n
    return BrierDecomposition(
        n=run.n,
        nbins=bins.nbins,
        brier_score=math.fsum(((p - e) ** 2).tolist()) / run.n,
        reliability=reliability,
        resolution=resolution,
        uncertainty=climatology * (1.0 - climatology),
    )
