"""Unit tests for crossed student x examination arrays."""

import numpy as np
import pytest

from src.exceptions import IndexOutOfRangeError, ValidationError
from src.experiments.crossed import generate_crossed_array, resit_cell_frequencies, run_crossed_array
from src.experiments.models import CrossedArraySpec, ResitMode


@pytest.fixture
def karl_spec() -> CrossedArraySpec:
    """A strong student 0 and a hard exam 0 among average peers."""
    abilities = [2.0] + [0.0] * 199
    difficulties = [2.0] + [0.0] * 199
    return CrossedArraySpec(abilities=abilities, difficulties=difficulties, resits=10, seed=3)


class TestGenerateCrossedArray:
    """Tests for generate_crossed_array."""

    def test_shape_and_values(self):
        """Test the tensor is binary with one slice per resit."""
        spec = CrossedArraySpec(abilities=[0.0] * 4, difficulties=[0.0] * 3, resits=5)

        array = generate_crossed_array(spec)

        assert array.outcomes.shape == (4, 3, 5)
        assert set(np.unique(array.outcomes).tolist()) <= {0, 1}

    def test_seeded(self):
        """Test the same seed gives the same tensor."""
        spec = CrossedArraySpec(abilities=[0.0] * 10, difficulties=[1.0] * 10, resits=3, seed=9)

        assert np.array_equal(generate_crossed_array(spec).outcomes, generate_crossed_array(spec).outcomes)


class TestRunCrossedArray:
    """Tests for run_crossed_array."""

    def test_equal_effects(self):
        """Test both margins sit near 0.5 when every effect is zero."""
        spec = CrossedArraySpec(abilities=[0.0] * 101, difficulties=[0.0] * 101, resits=100, seed=1)

        risks = run_crossed_array(generate_crossed_array(spec), 0, 0)

        assert risks.row_cells == risks.column_cells == 10_000
        assert risks.row_margin == pytest.approx(0.5, abs=0.02)
        assert risks.column_margin == pytest.approx(0.5, abs=0.02)
        assert risks.cell_probability == 0.5

    def test_strong_student_on_hard_exam(self, karl_spec):
        """Test the row margin is low, the column margin high and the cell at 0.5."""
        risks = run_crossed_array(generate_crossed_array(karl_spec), 0, 0)

        assert risks.row_margin < 0.2
        assert risks.column_margin > 0.8
        assert risks.row_margin < risks.cell_probability < risks.column_margin
        assert risks.cell_probability == 0.5
        assert len(risks.to_frame()) == 3

    def test_margins_too_small(self):
        """Test margins with too few sittings are rejected with their sizes."""
        spec = CrossedArraySpec(abilities=[0.0] * 10, difficulties=[0.0] * 10)

        with pytest.raises(ValidationError) as exc_info:
            run_crossed_array(generate_crossed_array(spec), 0, 0)

        assert exc_info.value.details == {"row_cells": 9, "column_cells": 9}

    def test_index_out_of_range(self, karl_spec):
        """Test a student index beyond the array."""
        with pytest.raises(IndexOutOfRangeError):
            run_crossed_array(generate_crossed_array(karl_spec), 200, 0)


class TestResitCellFrequencies:
    """Tests for resit_cell_frequencies."""

    def test_polya_resits_spread(self):
        """Test reinforced resits scatter the cell frequency."""
        spec = CrossedArraySpec(
            abilities=[0.0], difficulties=[0.0], resits=200, resit_mode=ResitMode.POLYA, concentration=2.0
        )

        frequencies = resit_cell_frequencies(spec, 0, 0, replicates=200, seed=4)

        assert len(frequencies) == 200
        assert float(np.std(frequencies)) > 0.15

    def test_independent_resits_concentrate(self):
        """Test independent resits concentrate at the cell probability."""
        spec = CrossedArraySpec(abilities=[0.0], difficulties=[0.0], resits=200)

        frequencies = resit_cell_frequencies(spec, 0, 0, replicates=200, seed=4)

        assert float(np.std(frequencies)) < 0.08
        assert float(np.mean(frequencies)) == pytest.approx(0.5, abs=0.02)

    def test_needs_replicates(self):
        """Test replicates < 1 is rejected."""
        spec = CrossedArraySpec(abilities=[0.0], difficulties=[0.0])

        with pytest.raises(ValidationError):
            resit_cell_frequencies(spec, 0, 0, replicates=0)
