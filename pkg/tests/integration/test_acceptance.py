"""End-to-end checks of the workbench's headline behaviours.

Each class exercises one behaviour across modules at the sizes used for
release sign-off:
- Wilson intervals for an observed 75%
- exact Pólya sequence probabilities
- limiting frequencies of the uniform Pólya urn
- the calibration hierarchy on alternating weather
- the adversary against every built-in H-based forecaster
- identification, information-base refinement and self-calibration
- replay determinism
"""

import itertools
from fractions import Fraction
from math import factorial

import pytest

from src.calibration.adversary import adversary_report
from src.calibration.criteria import overall_calibration, probability_calibration, subset_calibration
from src.cli.artifacts import RunArtifact, forecast_process, replay, write_artifact
from src.core.models import CellVerdict
from src.core.rules import SelectionRule
from src.core.serialization import run_to_csv
from src.core.validation import align_run
from src.experiments.asymptotics import run_identification, run_self_calibration
from src.experiments.definetti import run_definetti
from src.experiments.information import run_info_base
from src.forecasters.engine import run_forecaster
from src.forecasters.models import ForecasterSpec
from src.intervals.wilson import wilson_interval
from src.processes.models import PriorSpec, ProcessKind, ProcessSpec
from src.processes.oracles import polya_sequence_prob

# Mark all tests in this module as integration tests
pytestmark = pytest.mark.integration

ODD = SelectionRule.every_mth(2, 1, rule_id="odd")


class TestWilsonGoldens:
    """Wilson intervals for p = 0.75 at 95%."""

    def test_goldens(self):
        """Test the four rounded intervals."""
        expected = {10_000: (0.74, 0.76), 1_000: (0.72, 0.78), 100: (0.66, 0.82), 1: (0.12, 0.99)}

        for n, bounds in expected.items():
            assert wilson_interval(0.75, n, 0.95).rounded() == bounds


class TestPolyaExactOracle:
    """Exact rational probabilities of Pólya sequences."""

    def test_counts_only_up_to_ten_draws(self):
        """Test every sequence of length <= 10 has probability a!b!/(a+b+1)! under a uniform urn."""
        for n in range(1, 11):
            for seq in itertools.product((0, 1), repeat=n):
                a = sum(seq)
                b = n - a
                assert polya_sequence_prob(seq, 1, 1) == Fraction(
                    factorial(a) * factorial(b), factorial(a + b + 1)
                )

    def test_reordered_tosses(self):
        """Test HHTTHTH and HTHHTHT are equally likely at 1/280."""
        first = polya_sequence_prob([1, 1, 0, 0, 1, 0, 1], 1, 1)
        second = polya_sequence_prob([1, 0, 1, 1, 0, 1, 0], 1, 1)

        assert first == second == Fraction(1, 280)


@pytest.mark.slow
class TestDeFinettiUniformity:
    """Limiting frequency of the uniform Pólya urn."""

    def test_final_frequencies_uniform(self):
        """Test 2000 replicates at n = 10000 pass a 1% KS test against Beta(1, 1)."""
        result = run_definetti(r0=1, b0=1, n=10_000, replicates=2_000, seed=0)

        assert result.ks_critical_value == pytest.approx(0.0364, abs=1e-3)
        assert result.ks_distance < result.ks_critical_value


class TestCalibrationHierarchy:
    """Overall, probability and subset calibration on alternating weather."""

    def test_constant_half_separated(self, alternating_constant_run):
        """Test constant(0.5) passes overall and probability calibration but fails odd steps."""
        overall = overall_calibration(alternating_constant_run)
        probability = probability_calibration(alternating_constant_run)
        subset = subset_calibration(alternating_constant_run, [ODD])

        assert overall.verdict == CellVerdict.PASS
        assert overall.cells[0].discrepancy < 0.02
        assert probability.verdict == CellVerdict.PASS
        assert all(cell.discrepancy < 0.02 for cell in probability.cells)
        assert subset.cells[0].discrepancy == pytest.approx(0.5, abs=0.001)
        assert subset.verdict == CellVerdict.FAIL

    def test_oracle_exact(self, alternating_outcomes):
        """Test the oracle has zero discrepancy everywhere."""
        run = align_run(alternating_outcomes, run_forecaster(ForecasterSpec.oracle(), alternating_outcomes))
        reports = [
            overall_calibration(run),
            probability_calibration(run),
            subset_calibration(run, [ODD, SelectionRule.every_mth(2, 0)]),
        ]

        for report in reports:
            assert report.verdict == CellVerdict.PASS
            assert all(cell.discrepancy == 0.0 for cell in report.cells)


@pytest.mark.slow
class TestAdversaryGuarantee:
    """The adversary defeats every H-based forecaster."""

    def test_every_forecaster_every_seed(self, h_based_forecasters):
        """Test the majority threshold rule shows a discrepancy >= 0.5 for 20 seeds at n = 10000."""
        for spec in h_based_forecasters:
            for seed in range(20):
                cell = adversary_report(spec, 10_000, seed=seed).cells[0]
                assert cell.discrepancy >= 0.5, (spec.forecaster_id, seed)


@pytest.mark.slow
class TestAsymptoticIdentification:
    """Two valid forecasters agree in the limit."""

    def test_beta_priors_agree(self):
        """Test beta(1,1) and beta(2,2) forecasters differ by < 0.01 beyond step 50000 for 10 seeds."""
        process = ProcessSpec(kind=ProcessKind.BERNOULLI, p=0.3, n=100_000)
        uniform = ForecasterSpec.bayes_mixture(PriorSpec.beta(1, 1))
        beta22 = ForecasterSpec.bayes_mixture(PriorSpec.beta(2, 2))

        for seed in range(10):
            result = run_identification(process, uniform, beta22, seed=seed)
            assert max(result.divergence[50_000:]) < 0.01


@pytest.mark.slow
class TestInformationBaseLaw:
    """Refinement of a coarse forecast by a deeper information base."""

    def test_deep_forecasts_average_to_coarse(self, two_level_process):
        """Test deep forecasts and outcomes average to 0.4 where the coarse forecast is 0.4."""
        result = run_info_base(
            two_level_process, ForecasterSpec.constant(0.4), ForecasterSpec.covariate_rate("deep_rate")
        )

        assert abs(result.mean_deep_forecast - 0.4) < 0.01
        assert abs(result.outcome_frequency - 0.4) < 0.01


@pytest.mark.slow
class TestSelfCalibration:
    """Forecasters are calibrated on data from their own model."""

    @pytest.mark.parametrize(
        ("process", "forecaster"),
        [
            (
                ProcessSpec(kind=ProcessKind.MIXTURE, prior=PriorSpec.uniform(), n=10_000),
                ForecasterSpec.bayes_mixture(PriorSpec.uniform()),
            ),
            (
                ProcessSpec(kind=ProcessKind.POLYA, r0=2, b0=3, n=10_000),
                ForecasterSpec.polya_predictive(2, 3),
            ),
        ],
    )
    def test_coverage(self, process, forecaster):
        """Test 93-97% of 500 replicates have |z| <= 1.96."""
        result = run_self_calibration(process, forecaster, replicates=500, seed=0)

        assert 0.93 <= result.coverage <= 0.97


class TestDeterminism:
    """Runs replay bit-identically and CSV output is byte-stable."""

    @pytest.mark.parametrize(
        ("process", "forecaster"),
        [
            (ProcessSpec(kind=ProcessKind.POLYA, r0=1, b0=1, n=2_000, seed=17), ForecasterSpec.laplace()),
            (
                ProcessSpec(kind=ProcessKind.CATEGORY, rates=[0.1 * i for i in range(1, 10)], n=2_000, seed=3),
                ForecasterSpec.category([0.1 * i for i in range(1, 10)]),
            ),
            (
                ProcessSpec(
                    kind=ProcessKind.TWO_LEVEL,
                    deep_rates=[0.2, 0.6],
                    weights=[1.0, 1.0],
                    coarse_value=0.4,
                    n=2_000,
                    seed=8,
                ),
                ForecasterSpec.covariate_rate("deep_rate"),
            ),
        ],
    )
    def test_replay_and_csv(self, tmp_path, process, forecaster):
        """Test the artifact replays and its CSV is identical when regenerated."""
        generated, forecasts = forecast_process(process, forecaster)
        artifact = RunArtifact.from_generated(generated, forecaster, forecasts)
        path = write_artifact(artifact, tmp_path / "run.json")

        replayed = replay(path)
        regenerated, fresh = forecast_process(process, forecaster)
        again = RunArtifact.from_generated(regenerated, forecaster, fresh)

        assert replayed == artifact
        assert run_to_csv(again.run()) == run_to_csv(artifact.run())
        assert path.read_text(encoding="utf-8") == artifact.to_json()
