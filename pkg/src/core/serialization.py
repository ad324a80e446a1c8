"""Run serialization: JSON objects and per-step CSV export."""

import json
from collections.abc import Sequence
from io import StringIO
from typing import Any

import pandas as pd

from src.core.models import ForecastSeries, InformationBase, OutcomeSequence, ValidatedRun
from src.core.rules import SelectionRule
from src.core.validation import align_run


def run_to_dict(run: ValidatedRun) -> dict[str, Any]:
    """Serialize a run as {process, seed, outcomes, forecaster, forecasts, h_based}."""
    return {
        "process": run.outcomes.process_id,
        "seed": run.outcomes.seed,
        "outcomes": list(run.outcomes.outcomes),
        "forecaster": run.forecasts.forecaster_id,
        "forecasts": list(run.forecasts.forecasts),
        "h_based": run.forecasts.h_based,
    }


def run_from_dict(data: dict[str, Any]) -> ValidatedRun:
    """Rebuild a run from run_to_dict output."""
    outcomes = OutcomeSequence(
        outcomes=data["outcomes"],
        process_id=str(data.get("process", "external")),
        seed=int(data.get("seed", 0)),
    )
    forecasts = ForecastSeries(
        forecasts=data["forecasts"],
        forecaster_id=str(data.get("forecaster", "external")),
        h_based=bool(data.get("h_based", True)),
    )
    return align_run(outcomes, forecasts)


def run_to_json(run: ValidatedRun) -> str:
    # repr-based float encoding round-trips bit-exactly
    return json.dumps(run_to_dict(run), sort_keys=True)


def run_from_json(text: str) -> ValidatedRun:
    return run_from_dict(json.loads(text))


def run_to_frame(
    run: ValidatedRun,
    info: InformationBase | None = None,
    rules: Sequence[SelectionRule] = (),
) -> pd.DataFrame:
    """Per-step table with columns step, e, p, rule_memberships.

    rule_memberships lists, separated by ';', the ids of the rules selecting each step.
    """
    frame = pd.DataFrame(
        {
            "step": range(1, run.n + 1),
            "e": run.e,
            "p": run.p,
        }
    )
    memberships = [[] for _ in range(run.n)]
    if rules:
        base = info or InformationBase.sequential(run.e)
        for rule in rules:
            mask = rule.membership(base, run.p)
            for index in mask.nonzero()[0]:
                memberships[index].append(rule.rule_id)
    frame["rule_memberships"] = [";".join(ids) for ids in memberships]
    return frame


def run_to_csv(
    run: ValidatedRun,
    info: InformationBase | None = None,
    rules: Sequence[SelectionRule] = (),
) -> str:
    return str(run_to_frame(run, info, rules).to_csv(index=False, lineterminator="\n"))


def run_from_csv(
    text: str, process_id: str = "external", forecaster_id: str = "external"
) -> ValidatedRun:
    """Read back the step/e/p columns of run_to_csv output."""
    frame = pd.read_csv(StringIO(text), keep_default_na=False, float_precision="round_trip")
    return align_run(
        OutcomeSequence(outcomes=frame["e"].to_numpy(), process_id=process_id),
        ForecastSeries(forecasts=frame["p"].to_numpy(), forecaster_id=forecaster_id),
    )
