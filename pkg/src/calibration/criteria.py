"""The calibration hierarchy: overall, probability, subset and H-based calibration.

Each criterion returns a CalibrationReport with one cell per rule or bin. A
cell stores the raw sums over its members, so discrepancy and z can always be
recomputed from the report.
"""

import logging
from collections.abc import Sequence

import numpy as np

from src.calibration.models import DEFAULT_MIN_COUNT, DEFAULT_SIGNIFICANCE, BinSpec
from src.calibration.ztest import build_cell
from src.core.models import (
    CalibrationCell,
    CalibrationReport,
    Criterion,
    InformationBase,
    Scenario,
    ValidatedRun,
)
from src.core.rules import (
    MAX_WINDOW,
    CovariateClause,
    ForecastClause,
    SelectionRule,
    StepModuloClause,
    WindowClause,
)
from src.exceptions import CriterionMismatchError, EmptyRunError, NotHBasedError, ValidationError

logger = logging.getLogger(__name__)

ALL_RULE_ID = "all"


def _require_steps(run: ValidatedRun) -> None:
    if run.n == 0:
        raise EmptyRunError("run")


def _rule_cells(
    run: ValidatedRun,
    info: InformationBase,
    rules: Sequence[SelectionRule],
    significance: float,
    min_count: int,
) -> list[CalibrationCell]:
    cells = []
    for rule in rules:
        mask = rule.membership(info, run.p)
        cell = build_cell(rule.rule_id, run.e[mask], run.p[mask], significance, min_count)
        logger.debug(f"Rule {rule.rule_id}: count={cell.count}, verdict={cell.verdict.value}")
        cells.append(cell)
    return cells


def overall_calibration(
    run: ValidatedRun,
    significance: float = DEFAULT_SIGNIFICANCE,
    min_count: int = DEFAULT_MIN_COUNT,
) -> CalibrationReport:
    """Compare the overall outcome frequency with the mean forecast.

    Example:
        report = overall_calibration(align_run([1], [0.2]))
        report.cells[0].discrepancy  # 0.8
    """
    _require_steps(run)
    cell = build_cell(ALL_RULE_ID, run.e, run.p, significance, min_count)
    return CalibrationReport(
        criterion=Criterion.OVERALL,
        cells=[cell],
        significance=significance,
        min_count=min_count,
        forecaster_id=run.forecasts.forecaster_id,
    )


def probability_calibration(
    run: ValidatedRun,
    bins: BinSpec | None = None,
    significance: float = DEFAULT_SIGNIFICANCE,
) -> CalibrationReport:
    """
    Calibration within groups of steps sharing (nearly) the same forecast.

    Args:
        run: Validated run
        bins: Bin width and minimum cell count (default width 0.05, min 30)
        significance: Two-sided z test level

    Returns:
        CalibrationReport with one cell per occupied bin, in bin order
    """
    _require_steps(run)
    bins = bins or BinSpec()
    index = bins.bin_index(run.p)
    cells = [
        build_cell(
            bins.label(int(i)), run.e[index == i], run.p[index == i], significance, bins.min_count
        )
        for i in np.unique(index)
    ]
    return CalibrationReport(
        criterion=Criterion.PROBABILITY,
        cells=cells,
        significance=significance,
        min_count=bins.min_count,
        forecaster_id=run.forecasts.forecaster_id,
    )


def subset_calibration(
    run: ValidatedRun,
    rules: Sequence[SelectionRule],
    significance: float = DEFAULT_SIGNIFICANCE,
    min_count: int = DEFAULT_MIN_COUNT,
) -> CalibrationReport:
    """
    Calibration over subsets chosen without looking at outcomes or background information.

    Raises:
        CriterionMismatchError: If any rule is H-based (history_predicate)
    """
    _require_steps(run)
    for rule in rules:
        if rule.h_based:
            raise CriterionMismatchError(
                rule.rule_id, Criterion.SUBSET.value, "history predicates belong to h_calibration"
            )
    # static rules never read the record contents
    info = InformationBase.sequential(run.e)
    return CalibrationReport(
        criterion=Criterion.SUBSET,
        cells=_rule_cells(run, info, rules, significance, min_count),
        significance=significance,
        min_count=min_count,
        forecaster_id=run.forecasts.forecaster_id,
    )


def h_calibration(
    run: ValidatedRun,
    info: InformationBase,
    rules: Sequence[SelectionRule],
    significance: float = DEFAULT_SIGNIFICANCE,
    min_count: int = DEFAULT_MIN_COUNT,
) -> CalibrationReport:
    """
    Calibration over subsets selected from the information base (and forecasts).

    The report passes iff every rule with at least min_count members passes
    its z test.

    Raises:
        NotHBasedError: If the forecasts are not H-based
        ValidationError: If info was not built from the run's outcomes
        CriterionMismatchError: If a rule needs information the base lacks
    """
    _require_steps(run)
    if not run.h_based:
        raise NotHBasedError(run.forecasts.forecaster_id, "h_calibration")
    if info.outcomes != run.outcomes.outcomes:
        raise ValidationError(
            "Information base does not belong to the run's outcome sequence",
            details={"run": run.n, "info": info.n},
        )
    report = CalibrationReport(
        criterion=Criterion.H_BASED,
        cells=_rule_cells(run, info, rules, significance, min_count),
        significance=significance,
        min_count=min_count,
        forecaster_id=run.forecasts.forecaster_id,
    )
    logger.info(
        f"H-calibration of {report.forecaster_id}: {len(rules)} rules, "
        f"verdict={report.verdict.value}"
    )
    return report


def default_rule_family(
    info: InformationBase,
    max_window: int = 3,
    max_modulus: int = 7,
    threshold: float = 0.5,
) -> list[SelectionRule]:
    """
    The shipped finite family of H-based rules.

    Contains the all-steps rule, one rule per distinct value of a `category`
    covariate, every window pattern of length 1..max_window (sequential
    scenario only), every step residue modulo 2..max_modulus, and the forecast
    threshold rule with its complement.
    """
    if not 1 <= max_window <= MAX_WINDOW:
        raise ValidationError(f"max_window must lie in 1..{MAX_WINDOW}, got {max_window}")

    rules = [SelectionRule.all_steps(ALL_RULE_ID)]
    if "category" in info.covariates:
        for value in np.unique(info.covariate_array("category")):
            rules.append(
                SelectionRule.history(
                    f"category={value:g}",
                    covariates=[CovariateClause(name="category", value=float(value))],
                )
            )
    if info.scenario == Scenario.SEQUENTIAL:
        for width in range(1, max_window + 1):
            for code in range(2**width):
                pattern = [(code >> (width - 1 - j)) & 1 for j in range(width)]
                rules.append(
                    SelectionRule.history(
                        "window=" + "".join(str(a) for a in pattern),
                        window=WindowClause(pattern=pattern),
                    )
                )
    for modulus in range(2, max_modulus + 1):
        for remainder in range(modulus):
            rules.append(
                SelectionRule.history(
                    f"step%{modulus}={remainder}",
                    step_modulo=StepModuloClause(modulus=modulus, remainder=remainder),
                )
            )
    rules.extend(threshold_rules(threshold))
    return rules


def threshold_rules(threshold: float = 0.5) -> tuple[SelectionRule, SelectionRule]:
    """The forecast-threshold rule {p_k <= t} and its complement {p_k > t}."""
    return (
        SelectionRule.history(
            f"p<={threshold:g}", forecast=ForecastClause(operator="le", threshold=threshold)
        ),
        SelectionRule.history(
            f"p>{threshold:g}", forecast=ForecastClause(operator="gt", threshold=threshold)
        ),
    )
