"""Unit tests for Wilson score intervals."""

from itertools import pairwise

import pytest

from src.exceptions import ValidationError
from src.intervals.models import round_half_away
from src.intervals.wilson import (
    Z_95,
    example_two_table,
    normal_critical_value,
    single_trial_demo,
    wilson_interval,
)
from src.processes.rng import make_rng


class TestRoundHalfAway:
    """Tests for round_half_away."""

    @pytest.mark.parametrize(
        ("value", "expected"),
        [(0.125, 0.13), (0.115, 0.12), (0.7449, 0.74), (0.985, 0.99), (0.0, 0.0)],
    )
    def test_rounding(self, value, expected):
        """Test halves round away from zero at two decimals."""
        assert round_half_away(value) == expected


class TestWilsonInterval:
    """Tests for wilson_interval."""

    @pytest.mark.parametrize(
        ("n", "expected"),
        [(10_000, (0.74, 0.76)), (1_000, (0.72, 0.78)), (100, (0.66, 0.82)), (1, (0.12, 0.99))],
    )
    def test_worked_margins(self, n, expected):
        """Test the group and individual margins for an observed 75%."""
        assert wilson_interval(0.75, n, 0.95).rounded() == expected

    def test_uses_196_at_95_percent(self):
        """Test the conventional 1.96 is used for 95%."""
        assert normal_critical_value(0.95) == Z_95 == wilson_interval(0.5, 10).z

    def test_other_confidence_levels(self):
        """Test 99% uses the normal quantile and widens the interval."""
        assert normal_critical_value(0.99) == pytest.approx(2.5758, abs=1e-4)
        assert wilson_interval(0.75, 100, 0.99).width > wilson_interval(0.75, 100, 0.95).width

    @pytest.mark.parametrize(
        ("p_hat", "n", "confidence"),
        [(0.5, 0, 0.95), (1.2, 10, 0.95), (-0.1, 10, 0.95), (0.5, 10, 1.0), (float("nan"), 10, 0.95)],
    )
    def test_invalid_inputs(self, p_hat, n, confidence):
        """Test out-of-range inputs raise ValidationError."""
        with pytest.raises(ValidationError):
            wilson_interval(p_hat, n, confidence)

    def test_always_inside_unit_interval(self):
        """Test intervals stay within [0, 1] for random inputs, including the extremes."""
        rng = make_rng(0, "wilson-bounds")
        cases = [(0.0, 1), (1.0, 1), (0.0, 5), (1.0, 1000)]
        cases += [(float(p), int(n)) for p, n in zip(rng.random(500), rng.integers(1, 5000, 500), strict=True)]
        for p_hat, n in cases:
            result = wilson_interval(p_hat, n)
            assert 0.0 <= result.lower <= result.upper <= 1.0
            assert result.lower <= p_hat + 1e-12
            assert result.upper >= p_hat - 1e-12

    def test_mirror_image_of_complement(self):
        """Test the interval for 1 - p_hat reflects the interval for p_hat about 1/2."""
        rng = make_rng(0, "wilson-symmetry")
        for p_hat, n in zip(rng.random(500), rng.integers(1, 5000, 500), strict=True):
            interval = wilson_interval(float(p_hat), int(n))
            complement = wilson_interval(1.0 - float(p_hat), int(n))

            assert complement.lower == pytest.approx(1.0 - interval.upper, abs=1e-12)
            assert complement.upper == pytest.approx(1.0 - interval.lower, abs=1e-12)

    @pytest.mark.parametrize("p_hat", [0.0, 0.1, 0.25, 0.5, 0.75, 0.99, 1.0])
    def test_width_shrinks_with_n(self, p_hat):
        """Test the width strictly decreases as the number of trials grows."""
        widths = [wilson_interval(p_hat, n).width for n in range(1, 400)]

        assert all(later < earlier for earlier, later in pairwise(widths))

    def test_row_format(self):
        """Test to_row rounds the bounds for output."""
        row = wilson_interval(0.75, 1).to_row()

        assert row == {
            "p_hat": 0.75,
            "n": 1,
            "conf": 0.95,
            "lower": 0.12,
            "upper": 0.99,
            "method": "wilson",
        }

    def test_example_table(self):
        """Test the table covers n = 10000, 1000, 100 and 1 in order."""
        table = example_two_table()

        assert [r.n for r in table] == [10_000, 1_000, 100, 1]
        assert [r.rounded() for r in table] == [(0.74, 0.76), (0.72, 0.78), (0.66, 0.82), (0.12, 0.99)]

    @pytest.mark.slow
    def test_coverage(self):
        """Test 95% intervals cover p = 0.75 at n = 100 in 92-98% of replicates."""
        rng = make_rng(0, "wilson-coverage")
        successes = rng.binomial(100, 0.75, size=10_000)
        covered = 0
        for s in successes.tolist():
            result = wilson_interval(s / 100, 100)
            covered += result.lower <= 0.75 <= result.upper
        assert 0.92 <= covered / 10_000 <= 0.98


class TestSingleTrialDemo:
    """Tests for single_trial_demo."""

    def test_two_point_distribution(self):
        """Test one trial's success rate is 0 or 1 with the stated masses."""
        report = single_trial_demo(0.75)

        assert [(a.value, a.mass) for a in report.distribution] == [(0.0, 0.25), (1.0, 0.75)]
        assert report.support == [0.0, 1.0]
        assert report.wilson.rounded() == (0.12, 0.99)
        assert report.label == "critique exhibit"
        assert "contains neither outcome" in report.note

    def test_degenerate_p(self):
        """Test p = 1 leaves a single atom in the support."""
        report = single_trial_demo(1.0)

        assert report.support == [1.0]

    def test_invalid_p(self):
        """Test p outside [0, 1] is rejected."""
        with pytest.raises(ValidationError):
            single_trial_demo(1.5)
