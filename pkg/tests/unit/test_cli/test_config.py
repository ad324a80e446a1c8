"""Unit tests for CLI run configuration."""

import json

import pytest

from src.cli.config import Command, OutputFormat, RunConfig, build_config, load_config_file
from src.exceptions import ValidationError
from src.experiments.models import ExperimentKind, ExperimentSpec
from src.forecasters.models import ForecasterSpec
from src.processes.models import PriorSpec, ProcessKind, ProcessSpec

PROCESS = ProcessSpec(kind=ProcessKind.BERNOULLI, p=0.3, n=100, seed=2)


def _write(tmp_path, data) -> str:
    path = tmp_path / "config.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


class TestLoadConfigFile:
    """Tests for load_config_file."""

    def test_reads_object(self, tmp_path):
        """Test a JSON object is returned as a dict."""
        assert load_config_file(_write(tmp_path, {"n": 5})) == {"n": 5}

    def test_empty_file(self, tmp_path):
        """Test an empty config is a validation error."""
        path = tmp_path / "empty.json"
        path.write_text("  \n", encoding="utf-8")

        with pytest.raises(ValidationError, match="empty"):
            load_config_file(path)

    def test_invalid_json(self, tmp_path):
        """Test malformed JSON reports its position."""
        path = tmp_path / "bad.json"
        path.write_text("{\"n\": }", encoding="utf-8")

        with pytest.raises(ValidationError, match="line 1"):
            load_config_file(path)

    def test_not_utf8(self, tmp_path):
        """Test bytes that are not UTF-8 raise ValidationError."""
        path = tmp_path / "bad.json"
        path.write_bytes(b"\xff\xfe{\"n\": 10}")

        with pytest.raises(ValidationError, match="UTF-8"):
            load_config_file(path)

    def test_not_an_object(self, tmp_path):
        """Test a top-level list is rejected."""
        with pytest.raises(ValidationError, match="JSON object"):
            load_config_file(_write(tmp_path, [1, 2]))


class TestBuildConfig:
    """Tests for build_config."""

    def test_flags_override_file(self, tmp_path):
        """Test flag values win and None flags are ignored."""
        path = _write(tmp_path, {"process": PROCESS.model_dump(mode="json"), "n": 50, "format": "csv"})

        config = build_config("simulate", path, {"n": 20, "seed": None, "format": "json"})

        assert config.command == Command.SIMULATE
        assert config.n == 20
        assert config.seed is None
        assert config.format == OutputFormat.JSON

    def test_no_file(self):
        """Test flags alone can build a config."""
        config = build_config("wilson", None, {"p_hat": 0.6, "n": 10})

        assert (config.p_hat, config.n, config.confidence) == (0.6, 10, 0.95)


class TestRunConfig:
    """Tests for RunConfig validation and resolution."""

    @pytest.mark.parametrize(
        ("command", "fields", "message"),
        [
            (Command.SIMULATE, {}, "needs a process"),
            (Command.FORECAST, {"process": PROCESS}, "needs a forecaster"),
            (Command.ADVERSARY, {"forecaster": ForecasterSpec.laplace()}, "needs --n"),
            (Command.EXPERIMENT, {}, "needs an experiment"),
            (Command.REPLAY, {}, "needs an artifact"),
            (Command.EVALUATE, {"process": PROCESS}, "artifact or a process and a forecaster"),
        ],
    )
    def test_missing_inputs(self, command, fields, message):
        """Test each command names the input it is missing."""
        with pytest.raises(ValidationError, match=message):
            RunConfig(command=command, **fields)

    def test_resolved_process(self):
        """Test --n and --seed are applied to the process."""
        config = RunConfig(command=Command.SIMULATE, process=PROCESS, n=10, seed=9)

        resolved = config.resolved_process()

        assert (resolved.n, resolved.seed) == (10, 9)

    def test_resolved_experiment(self):
        """Test --seed replaces the experiment seed."""
        experiment = ExperimentSpec(
            kind=ExperimentKind.DEFINETTI,
            process=ProcessSpec(kind=ProcessKind.MIXTURE, prior=PriorSpec.uniform(), n=100),
            replicates=100,
            seed=1,
        )

        assert RunConfig(command=Command.EXPERIMENT, experiment=experiment).resolved_experiment().seed == 1
        config = RunConfig(command=Command.EXPERIMENT, experiment=experiment, seed=4)
        assert config.resolved_experiment().seed == 4

    def test_bins(self):
        """Test bin width and min count feed the bin spec."""
        config = RunConfig(command=Command.WILSON, bin_width=0.1, min_count=5)

        assert config.bins.nbins == 10
        assert config.bins.min_count == 5
