"""Unit tests for the command-line entry point."""

import io
import json

import pandas as pd
import pytest

from src.cli.config import Command, RunConfig
from src.cli.main import EXIT_INVALID, EXIT_OK, EXIT_RUNTIME, execute, run_cli
from src.core.rules import SelectionRule
from src.experiments.models import ExperimentKind, ExperimentSpec
from src.forecasters.models import ForecasterSpec
from src.processes.models import PriorSpec, ProcessKind, ProcessSpec

ALTERNATING = ProcessSpec(kind=ProcessKind.DETERMINISTIC, pattern=[1, 0], n=10_000)


def _invoke(argv: list[str]) -> tuple[int, dict]:
    stdout = io.StringIO()
    code = run_cli(argv, stdout)
    lines = stdout.getvalue().splitlines()
    assert len(lines) == 1
    return code, json.loads(lines[0])


def _config_file(tmp_path, **fields) -> str:
    data = {
        key: value.model_dump(mode="json") if hasattr(value, "model_dump") else value
        for key, value in fields.items()
    }
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


class TestWilsonCommand:
    """Tests for the wilson command."""

    def test_single_trial(self):
        """Test one trial at 75% gives [0.12, 0.99]."""
        code, summary = _invoke(["wilson", "--phat", "0.75", "--n", "1", "--conf", "0.95"])

        assert code == EXIT_OK
        assert summary["status"] == "ok"
        assert summary["intervals"] == [
            {"p_hat": 0.75, "n": 1, "conf": 0.95, "lower": 0.12, "upper": 0.99, "method": "wilson"}
        ]

    def test_example_table(self, tmp_path):
        """Test the four-row table is written when --n is omitted."""
        code, summary = _invoke(["wilson", "--out", str(tmp_path)])

        assert code == EXIT_OK
        assert [row["n"] for row in summary["intervals"]] == [10_000, 1_000, 100, 1]
        assert (tmp_path / "wilson.csv").read_text(encoding="utf-8").splitlines()[0] == (
            "p_hat,n,conf,lower,upper,method"
        )

    def test_invalid_confidence(self):
        """Test a confidence of 1 exits with status 1."""
        code, summary = _invoke(["wilson", "--conf", "1.0", "--n", "5"])

        assert code == EXIT_INVALID
        assert summary["status"] == "invalid"


class TestConfigErrors:
    """Tests for configuration failures."""

    def test_unknown_command(self):
        """Test an unknown command exits with status 1 instead of argparse's 2."""
        code, summary = _invoke(["forecastt"])

        assert code == EXIT_INVALID
        assert summary["command"] is None
        assert "invalid choice" in summary["error"]

    def test_empty_config(self, tmp_path):
        """Test an empty config file exits with status 1."""
        path = tmp_path / "empty.json"
        path.write_text("", encoding="utf-8")

        code, summary = _invoke(["simulate", "--config", str(path)])

        assert code == EXIT_INVALID
        assert "empty" in summary["error"]

    def test_config_not_utf8(self, tmp_path):
        """Test a config file that is not UTF-8 exits with status 1 and a summary."""
        path = tmp_path / "bad.json"
        path.write_bytes(b"\xff\xfe{\"process\": {}}")

        code, summary = _invoke(["wilson", "--config", str(path)])

        assert code == EXIT_INVALID
        assert summary["status"] == "invalid"
        assert "UTF-8" in summary["error"]

    def test_missing_config(self, tmp_path):
        """Test an unreadable config file exits with status 2."""
        code, _ = _invoke(["simulate", "--config", str(tmp_path / "absent.json")])

        assert code == EXIT_RUNTIME

    def test_invalid_process(self, tmp_path):
        """Test a process with p outside [0, 1] exits with status 1."""
        path = _config_file(tmp_path, process={"kind": "bernoulli", "p": 1.5, "n": 10})

        code, _ = _invoke(["simulate", "--config", path])

        assert code == EXIT_INVALID


class TestSimulateAndForecast:
    """Tests for simulate and forecast."""

    def test_simulate_writes_artifact_and_table(self, tmp_path):
        """Test simulate writes the artifact and the outcome table."""
        path = _config_file(tmp_path, process=ALTERNATING)
        out = tmp_path / "out"

        code, summary = _invoke(["simulate", "--config", path, "--out", str(out), "--n", "10"])

        assert code == EXIT_OK
        assert summary["n"] == 10
        assert summary["frequency"] == 0.5
        assert (out / "simulate.json").exists()
        assert pd.read_csv(out / "outcomes.csv")["e"].tolist() == [1, 0] * 5

    def test_no_files_without_out(self, tmp_path):
        """Test nothing is written when --out is omitted."""
        path = _config_file(tmp_path, process=ALTERNATING)

        code, summary = _invoke(["simulate", "--config", path])

        assert code == EXIT_OK
        assert summary["files"] == []

    def test_forecast_csv_byte_stable(self, tmp_path):
        """Test the same seed writes byte-identical run files."""
        process = ProcessSpec(kind=ProcessKind.POLYA, r0=2, b0=3, n=500)
        path = _config_file(tmp_path, process=process, forecaster=ForecasterSpec.polya_predictive(2, 3))

        for name in ("a", "b"):
            _invoke(["forecast", "--config", path, "--seed", "21", "--out", str(tmp_path / name)])

        for file in ("run.csv", "run.json"):
            assert (tmp_path / "a" / file).read_bytes() == (tmp_path / "b" / file).read_bytes()
        assert (tmp_path / "a" / "run.csv").read_text(encoding="utf-8").startswith("step,e,p")


class TestEvaluateCommand:
    """Tests for evaluate."""

    def test_odd_steps_fail_constant_forecaster(self, tmp_path):
        """Test the report row for odd steps shows delta 0.5 and a fail."""
        config = RunConfig(
            command=Command.EVALUATE,
            process=ALTERNATING,
            forecaster=ForecasterSpec.constant(0.5),
            rules=[SelectionRule.every_mth(2, 1, rule_id="odd")],
            out=tmp_path,
        )
        stdout = io.StringIO()

        code = execute(config, stdout)

        summary = json.loads(stdout.getvalue())
        assert code == EXIT_OK
        assert summary["verdicts"]["overall"] == "pass"
        assert summary["verdicts"]["subset"] == "fail"
        report = pd.read_csv(tmp_path / "report.csv")
        odd = report[report["rule_or_bin"] == "odd"].iloc[0]
        assert odd["criterion"] == "subset"
        assert odd["delta"] == pytest.approx(0.5)
        assert odd["verdict"] == "fail"

    def test_evaluate_stored_artifact(self, tmp_path):
        """Test a forecast artifact is evaluated with the default family."""
        path = _config_file(tmp_path, process=ALTERNATING, forecaster=ForecasterSpec.laplace())
        _invoke(["forecast", "--config", path, "--n", "200", "--out", str(tmp_path / "runs")])

        code, summary = _invoke(
            ["evaluate", "--artifact", str(tmp_path / "runs" / "run.json"), "--format", "json"]
        )

        assert code == EXIT_OK
        assert summary["n"] == 200
        assert "h_based" in summary["verdicts"]

    def test_oracle_skips_history_family(self, tmp_path):
        """Test a non-H-based forecaster is evaluated without the H rule family."""
        path = _config_file(tmp_path, process=ALTERNATING, forecaster=ForecasterSpec.oracle())

        code, summary = _invoke(["evaluate", "--config", path, "--n", "100"])

        assert code == EXIT_OK
        assert "h_based" not in summary["verdicts"]


class TestAdversaryCommand:
    """Tests for adversary."""

    def test_defeats_laplace(self, tmp_path):
        """Test the adversary's majority rule fails the forecaster."""
        path = _config_file(tmp_path, forecaster=ForecasterSpec.laplace())

        code, summary = _invoke(["adversary", "--config", path, "--n", "400", "--seed", "2"])

        assert code == EXIT_OK
        assert summary["delta"] >= 0.5
        assert summary["verdict"] == "fail"


class TestReplayCommand:
    """Tests for replay."""

    @pytest.fixture
    def artifact_path(self, tmp_path):
        path = _config_file(tmp_path, process=ALTERNATING, forecaster=ForecasterSpec.climatology(4.0))
        _invoke(["forecast", "--config", path, "--n", "300", "--out", str(tmp_path / "runs")])
        return tmp_path / "runs" / "run.json"

    def test_replay_ok(self, artifact_path):
        """Test an untouched artifact replays and is evaluated."""
        code, summary = _invoke(["replay", str(artifact_path)])

        assert code == EXIT_OK
        assert summary["replayed"] is True
        assert summary["forecaster"] == "climatology(4.0)"

    def test_artifact_not_utf8(self, tmp_path):
        """Test an artifact that is not UTF-8 exits with status 1."""
        path = tmp_path / "run.json"
        path.write_bytes(b"\xff\xfe{\"seed\": 1}")

        code, summary = _invoke(["replay", str(path)])

        assert code == EXIT_INVALID
        assert summary["status"] == "invalid"

    def test_tampered_artifact(self, artifact_path):
        """Test a changed outcome exits with status 2."""
        data = json.loads(artifact_path.read_text(encoding="utf-8"))
        data["outcomes"][10] = 1 - data["outcomes"][10]
        artifact_path.write_text(json.dumps(data), encoding="utf-8")

        code, summary = _invoke(["replay", str(artifact_path)])

        assert code == EXIT_RUNTIME
        assert "step 11" in summary["error"]

    def test_version_mismatch(self, artifact_path):
        """Test an artifact from another format version exits with status 2."""
        data = json.loads(artifact_path.read_text(encoding="utf-8"))
        data["format_version"] = "99"
        artifact_path.write_text(json.dumps(data), encoding="utf-8")

        code, _ = _invoke(["replay", str(artifact_path)])

        assert code == EXIT_RUNTIME


class TestExperimentCommand:
    """Tests for experiment."""

    def test_identification_outputs(self, tmp_path):
        """Test the experiment writes its table and summary."""
        experiment = ExperimentSpec(
            kind=ExperimentKind.IDENTIFICATION,
            process=ProcessSpec(kind=ProcessKind.BERNOULLI, p=0.3, n=500),
            forecasters=[
                ForecasterSpec.bayes_mixture(PriorSpec.uniform()),
                ForecasterSpec.bayes_mixture(PriorSpec.beta(2, 2)),
            ],
        )
        path = _config_file(tmp_path, experiment=experiment)

        code, summary = _invoke(["experiment", "--config", path, "--seed", "11", "--out", str(tmp_path)])

        assert code == EXIT_OK
        assert summary["experiment"] == "identification"
        assert summary["seed"] == 11
        assert (tmp_path / "identification.csv").exists()
        stored = json.loads((tmp_path / "identification.summary.json").read_text(encoding="utf-8"))
        assert stored["tail_max"] == summary["tail_max"]
