"""Crossed student x examination arrays and their competing risk estimates."""

import logging

import numpy as np

from src.exceptions import ValidationError
from src.experiments.models import CrossedArray, CrossedArrayRisks, CrossedArraySpec, ResitMode
from src.processes.rng import make_rng

logger = logging.getLogger(__name__)


def _sittings(
    probabilities: np.ndarray,
    resits: int,
    mode: ResitMode,
    concentration: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """Binary failures with a trailing resit axis for every entry of probabilities."""
    uniforms = rng.random((*probabilities.shape, resits))
    if mode == ResitMode.INDEPENDENT:
        return (uniforms < probabilities[..., None]).astype(np.int8)

    # Pólya urn per cell holding concentration*q "red" weight out of concentration
    red = concentration * probabilities
    total = np.full(probabilities.shape, concentration)
    draws = np.empty(uniforms.shape, dtype=np.int8)
    for t in range(resits):
        failed = uniforms[..., t] < red / total
        draws[..., t] = failed
        red = red + failed
        total = total + 1.0
    return draws


def generate_crossed_array(spec: CrossedArraySpec) -> CrossedArray:
    """Draw the outcome tensor of a crossed array from its seed."""
    outcomes = _sittings(
        spec.failure_probabilities(),
        spec.resits,
        spec.resit_mode,
        spec.concentration,
        make_rng(spec.seed, "crossed_array"),
    )
    logger.info(
        f"Generated crossed array {spec.shape} ({spec.resit_mode.value} resits), seed={spec.seed}"
    )
    return CrossedArray(spec=spec, outcomes=outcomes)


def run_crossed_array(
    array: CrossedArray,
    row: int,
    column: int,
    min_margin_cells: int = 1000,
) -> CrossedArrayRisks:
    """
    Three estimates of one student's risk of failing one examination.

    - row margin: failure frequency over the student's other examinations
    - column margin: failure frequency of the other students on this examination
    - cell probability: the link-function value for this student and examination

    Margin sizes count sittings, so a student's other exams contribute
    (exams - 1) * resits observations.

    Raises:
        IndexOutOfRangeError: If row or column is outside the array
        ValidationError: If either margin has fewer than min_margin_cells sittings
    """
    array.check_indices(row, column)
    students, exams, resits = array.spec.shape
    row_cells = (exams - 1) * resits
    column_cells = (students - 1) * resits
    if min(row_cells, column_cells) < min_margin_cells:
        raise ValidationError(
            f"Margins need at least {min_margin_cells} sittings, "
            f"got row={row_cells}, column={column_cells}",
            details={"row_cells": row_cells, "column_cells": column_cells},
        )

    outcomes = array.outcomes
    row_failures = int(outcomes[row].sum()) - int(outcomes[row, column].sum())
    column_failures = int(outcomes[:, column].sum()) - int(outcomes[row, column].sum())
    risks = CrossedArrayRisks(
        row=row,
        column=column,
        row_margin=row_failures / row_cells,
        column_margin=column_failures / column_cells,
        cell_probability=array.cell_probability(row, column),
        cell_frequency=float(outcomes[row, column].mean()),
        row_cells=row_cells,
        column_cells=column_cells,
    )
    logger.info(
        f"Crossed array ({row}, {column}): row margin {risks.row_margin:.4f}, "
        f"column margin {risks.column_margin:.4f}, cell {risks.cell_probability:.4f}"
    )
    return risks


def resit_cell_frequencies(
    spec: CrossedArraySpec,
    row: int,
    column: int,
    replicates: int,
    seed: int = 0,
) -> list[float]:
    """
    Failure frequency over the resits of one cell, across independent replicates.

    Under Pólya reinforcement the frequencies spread out like
    Beta(concentration*q, concentration*(1-q)) instead of concentrating at q.
    """
    if replicates < 1:
        raise ValidationError(f"replicates must be >= 1, got {replicates}")
    probability = spec.cell_probability(row, column)
    draws = _sittings(
        np.full(replicates, probability),
        spec.resits,
        spec.resit_mode,
        spec.concentration,
        make_rng(seed, "resit_cell", row, column),
    )
    return draws.mean(axis=-1).tolist()
