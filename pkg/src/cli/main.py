"""Command-line entry point.

Usage:
    prequential wilson --phat 0.75 --n 1 --conf 0.95
    prequential simulate --config process.json --seed 7 --out runs/
    prequential evaluate --config evaluate.json --out reports/ --format csv
    prequential replay runs/run.json

Logs go to stderr; stdout carries exactly one line of JSON summarising the
command. Exit codes: 0 success, 1 invalid input, 2 runtime failure.
"""

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any, NoReturn, TextIO

import pandas as pd
import pydantic

from src.calibration.adversary import majority_threshold_rule
from src.calibration.criteria import (
    default_rule_family,
    h_calibration,
    overall_calibration,
    probability_calibration,
    subset_calibration,
)
from src.calibration.scoring import brier_decomposition
from src.cli.artifacts import (
    RunArtifact,
    adversary_artifact,
    forecast_process,
    read_artifact,
    replay,
)
from src.cli.config import Command, OutputFormat, RunConfig, build_config
from src.core.files import atomic_write_text
from src.core.models import CalibrationReport
from src.core.serialization import run_to_csv
from src.exceptions import ValidationError, WorkbenchRuntimeError
from src.experiments.runner import run_experiment
from src.intervals.wilson import example_two_table, wilson_interval
from src.logging_config import resolve_level, setup_logging
from src.tracing import get_tracer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_RUNTIME = 2

REPORT_COLUMNS = ["criterion", "rule_or_bin", "count", "mean_p", "freq_e", "delta", "z", "verdict"]


# =============================================================================
# Output helpers
# =============================================================================


def _json_records(frame: pd.DataFrame) -> list[dict[str, Any]]:
    # NaN is not JSON; missing values become null
    return frame.astype(object).where(frame.notna(), None).to_dict(orient="records")


def _table_text(frame: pd.DataFrame, fmt: OutputFormat) -> str:
    if fmt == OutputFormat.JSON:
        return json.dumps(_json_records(frame), sort_keys=True) + "\n"
    return str(frame.to_csv(index=False, lineterminator="\n"))


def _report_frame(reports: Sequence[CalibrationReport]) -> pd.DataFrame:
    rows = [row for report in reports for row in report.to_rows()]
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


class CommandOutput:
    """Summary line plus the files a command produced, keyed by file name."""

    def __init__(self, summary: dict[str, Any]):
        self.summary = summary
        self.files: dict[str, str] = {}

    def add_table(self, stem: str, frame: pd.DataFrame, fmt: OutputFormat) -> None:
        self.files[f"{stem}.{fmt.value}"] = _table_text(frame, fmt)


def _write_outputs(out: Path | None, output: CommandOutput) -> list[str]:
    if out is None:
        return []
    # sorted for a stable write order
    return [str(atomic_write_text(out / name, output.files[name])) for name in sorted(output.files)]


# =============================================================================
# Commands
# =============================================================================


def _evaluate_artifact(config: RunConfig, artifact: RunArtifact) -> CommandOutput:
    run = artifact.run()
    info = artifact.information_base()
    reports = [
        overall_calibration(run, config.significance, config.min_count),
        probability_calibration(run, config.bins, config.significance),
    ]

    rules = list(config.rules)
    if not rules:
        if run.h_based:
            rules = default_rule_family(info)
        else:
            logger.warning(
                f"{run.forecasts.forecaster_id} is not H-based; skipping the default H rule family"
            )
    static = [rule for rule in rules if not rule.h_based]
    history = [rule for rule in rules if rule.h_based]
    if static:
        reports.append(subset_calibration(run, static, config.significance, config.min_count))
    if history:
        reports.append(h_calibration(run, info, history, config.significance, config.min_count))

    brier = brier_decomposition(run, config.bins)
    output = CommandOutput(
        {
            "process": artifact.source_id,
            "forecaster": run.forecasts.forecaster_id,
            "n": run.n,
            "verdicts": {report.criterion.value: report.verdict.value for report in reports},
            "brier_score": brier.brier_score,
            "reliability": brier.reliability,
        }
    )
    output.add_table("report", _report_frame(reports), config.format)
    return output


def _simulate(config: RunConfig) -> CommandOutput:
    generated, _ = forecast_process(config.resolved_process())
    artifact = RunArtifact.from_generated(generated)
    output = CommandOutput(
        {
            "process": generated.spec.process_id,
            "seed": generated.spec.seed,
            "n": generated.sequence.n,
            "frequency": generated.sequence.frequency(),
        }
    )
    output.files["simulate.json"] = artifact.to_json()
    sequence = generated.sequence
    frame = pd.DataFrame({"step": range(1, sequence.n + 1), "e": sequence.outcomes})
    for name, values in generated.covariates.items():
        frame[name] = values
    output.add_table("outcomes", frame, config.format)
    return output


def _forecast(config: RunConfig) -> CommandOutput:
    assert config.forecaster is not None
    generated, forecasts = forecast_process(config.resolved_process(), config.forecaster)
    assert forecasts is not None
    artifact = RunArtifact.from_generated(generated, config.forecaster, forecasts)
    output = CommandOutput(
        {
            "process": generated.spec.process_id,
            "forecaster": forecasts.forecaster_id,
            "seed": generated.spec.seed,
            "n": forecasts.n,
            "h_based": forecasts.h_based,
            "mean_forecast": float(forecasts.array.mean()),
        }
    )
    output.files["run.json"] = artifact.to_json()
    if config.format == OutputFormat.CSV:
        output.files["run.csv"] = run_to_csv(artifact.run())
    else:
        frame = pd.DataFrame({"e": artifact.outcomes, "p": artifact.forecasts})
        output.add_table("run", frame, config.format)
    return output


def _evaluate(config: RunConfig) -> CommandOutput:
    if config.artifact is not None:
        artifact = read_artifact(config.artifact)
    else:
        assert config.forecaster is not None
        generated, forecasts = forecast_process(config.resolved_process(), config.forecaster)
        artifact = RunArtifact.from_generated(generated, config.forecaster, forecasts)
    return _evaluate_artifact(config, artifact)


def _adversary(config: RunConfig) -> CommandOutput:
    assert config.forecaster is not None and config.n is not None
    artifact = adversary_artifact(config.forecaster, config.n, config.seed or 0)
    run = artifact.run()
    rule = majority_threshold_rule(run.forecasts)
    report = h_calibration(
        run, artifact.information_base(), [rule], config.significance, config.min_count
    )
    cell = report.cells[0]
    output = CommandOutput(
        {
            "forecaster": run.forecasts.forecaster_id,
            "n": run.n,
            "seed": artifact.seed,
            "rule": cell.cell_id,
            "count": cell.count,
            "delta": cell.discrepancy,
            "verdict": cell.verdict.value,
        }
    )
    output.files["adversary.json"] = artifact.to_json()
    output.add_table("report", _report_frame([report]), config.format)
    return output


def _experiment(config: RunConfig) -> CommandOutput:
    spec = config.resolved_experiment()
    result = run_experiment(spec)
    summary = json.loads(json.dumps(result.summary(), default=str))
    output = CommandOutput({"experiment": spec.kind.value, "seed": spec.seed} | summary)
    output.files[f"{spec.kind.value}.summary.json"] = json.dumps(summary, sort_keys=True) + "\n"
    output.add_table(spec.kind.value, result.to_frame(), config.format)
    return output


def _wilson(config: RunConfig) -> CommandOutput:
    if config.n is None:
        intervals = example_two_table(config.confidence)
    else:
        intervals = [wilson_interval(config.p_hat, config.n, config.confidence)]
    rows = [interval.to_row() for interval in intervals]
    output = CommandOutput({"intervals": rows})
    output.add_table("wilson", pd.DataFrame(rows), config.format)
    return output


def _replay(config: RunConfig) -> CommandOutput:
    assert config.artifact is not None
    artifact = replay(config.artifact)
    output = (
        _evaluate_artifact(config, artifact)
        if artifact.forecasts is not None
        else CommandOutput({"process": artifact.source_id, "n": len(artifact.outcomes)})
    )
    output.summary["replayed"] = True
    return output


COMMANDS = {
    Command.SIMULATE: _simulate,
    Command.FORECAST: _forecast,
    Command.EVALUATE: _evaluate,
    Command.ADVERSARY: _adversary,
    Command.EXPERIMENT: _experiment,
    Command.WILSON: _wilson,
    Command.REPLAY: _replay,
}


def execute(config: RunConfig, stdout: TextIO | None = None) -> int:
    """
    Run one configured command, write its files and print the summary line.

    Returns:
        Exit status: 0 ok, 1 validation error, 2 runtime error
    """
    stdout = stdout or sys.stdout
    tracer = get_tracer(__name__)
    with tracer.start_as_current_span(f"cli.{config.command.value}") as span:
        span.set_attribute("cli.command", config.command.value)
        if config.seed is not None:
            span.set_attribute("cli.seed", str(config.seed))
        try:
            output = COMMANDS[config.command](config)
            files = _write_outputs(config.out, output)
        except (ValidationError, pydantic.ValidationError) as e:
            logger.error(f"{config.command.value} rejected its input: {e}")
            span.set_attribute("cli.exit", EXIT_INVALID)
            _emit(stdout, {"command": config.command.value, "status": "invalid", "error": str(e)})
            return EXIT_INVALID
        except (WorkbenchRuntimeError, OSError) as e:
            logger.error(f"{config.command.value} failed: {e}")
            span.set_attribute("cli.exit", EXIT_RUNTIME)
            _emit(stdout, {"command": config.command.value, "status": "error", "error": str(e)})
            return EXIT_RUNTIME

        span.set_attribute("cli.exit", EXIT_OK)
        status = {"command": config.command.value, "status": "ok", "files": files}
        _emit(stdout, status | output.summary)
        return EXIT_OK


def _emit(stdout: TextIO, summary: dict[str, Any]) -> None:
    stdout.write(json.dumps(summary, sort_keys=True, default=str) + "\n")
    stdout.flush()


# =============================================================================
# Argument parsing
# =============================================================================


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports usage errors as ValidationError instead of exiting."""

    def error(self, message: str) -> NoReturn:
        raise ValidationError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON config file (flags override it)")
    common.add_argument("--seed", type=int, help="Top-level seed (unsigned 64-bit)")
    common.add_argument("--out", type=Path, help="Output directory (default: no files)")
    common.add_argument(
        "--format", choices=[f.value for f in OutputFormat], help="Report file format"
    )
    common.add_argument("--log-level", help="Logging level (default: PREQ_LOG_LEVEL or WARNING)")

    parser = _Parser(
        prog="prequential",
        description="Calibration workbench: simulate, forecast, evaluate and replay runs",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for command in (Command.SIMULATE, Command.FORECAST, Command.EVALUATE):
        sub = commands.add_parser(command.value, parents=[common], help=f"{command.value} a run")
        sub.add_argument("--n", type=int, help="Sequence length (overrides the process spec)")
        if command == Command.EVALUATE:
            sub.add_argument("--artifact", type=Path, help="Evaluate a stored run artifact")

    adversary = commands.add_parser(
        Command.ADVERSARY.value, parents=[common], help="defeat a forecaster"
    )
    adversary.add_argument("--n", type=int, help="Sequence length")

    commands.add_parser(
        Command.EXPERIMENT.value, parents=[common], help="run a composite experiment"
    )

    wilson = commands.add_parser(
        Command.WILSON.value, parents=[common], help="Wilson score intervals"
    )
    wilson.add_argument(
        "--phat", dest="p_hat", type=float, help="Observed proportion (default 0.75)"
    )
    wilson.add_argument("--n", type=int, help="Trials (default: the four-row example table)")
    wilson.add_argument(
        "--conf", dest="confidence", type=float, help="Confidence level (default 0.95)"
    )

    replay_parser = commands.add_parser(
        Command.REPLAY.value, parents=[common], help="replay a run artifact"
    )
    replay_parser.add_argument(
        "artifact", type=Path, help="Artifact written by simulate/forecast/adversary"
    )
    return parser


def run_cli(argv: Sequence[str] | None = None, stdout: TextIO | None = None) -> int:
    """Parse argv, build the RunConfig and execute it."""
    stdout = stdout or sys.stdout
    try:
        args = vars(build_parser().parse_args(argv))
    except ValidationError as e:
        setup_logging(level=resolve_level(None, default=logging.WARNING), stream=sys.stderr)
        logger.error(f"Invalid arguments: {e}")
        _emit(stdout, {"command": None, "status": "invalid", "error": str(e)})
        return EXIT_INVALID
    level = resolve_level(args.pop("log_level", None), default=logging.WARNING)
    setup_logging(level=level, stream=sys.stderr)

    command = args.pop("command")
    config_path = args.pop("config", None)
    try:
        config = build_config(command, config_path, args)
    except (ValidationError, pydantic.ValidationError) as e:
        logger.error(f"Invalid configuration: {e}")
        _emit(stdout, {"command": command, "status": "invalid", "error": str(e)})
        return EXIT_INVALID
    except OSError as e:
        logger.error(f"Cannot read configuration: {e}")
        _emit(stdout, {"command": command, "status": "error", "error": str(e)})
        return EXIT_RUNTIME
    return execute(config, stdout)


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
