"""Unit tests for calibration models."""

import numpy as np
import pytest

from src.calibration.models import BinSpec, BrierDecomposition
from src.exceptions import ValidationError


class TestBinSpec:
    """Tests for BinSpec."""

    def test_default_bins(self):
        """Test the default width gives 20 bins and min count 30."""
        bins = BinSpec()

        assert bins.nbins == 20
        assert bins.min_count == 30

    def test_width_must_divide_unit_interval(self):
        """Test a width whose inverse is not an integer is rejected."""
        with pytest.raises(ValidationError):
            BinSpec(width=0.3)

    def test_bin_index_edges(self):
        """Test half-open bins with p = 1 folded into the last bin."""
        index = BinSpec(width=0.05).bin_index(np.array([0.0, 0.049, 0.05, 0.999, 1.0]))

        assert index.tolist() == [0, 0, 1, 19, 19]

    def test_bin_index_exact_hundredths(self):
        """Test forecasts on a bin edge whose product falls just short of an integer."""
        index = BinSpec(width=0.01).bin_index(np.array([0.29, 0.57, 0.58, 0.3]))

        assert index.tolist() == [29, 57, 58, 30]

    def test_labels(self):
        """Test only the last bin is closed on the right."""
        bins = BinSpec(width=0.05)

        assert bins.label(0) == "[0,0.05)"
        assert bins.label(10) == "[0.5,0.55)"
        assert bins.label(19) == "[0.95,1]"


class TestBrierDecomposition:
    """Tests for BrierDecomposition."""

    def test_skill_score(self):
        """Test skill is (resolution - reliability) / uncertainty."""
        decomposition = BrierDecomposition(
            n=10, nbins=20, brier_score=0.2, reliability=0.05, resolution=0.1, uncertainty=0.25
        )

        assert decomposition.skill_score == pytest.approx(0.2)
        assert decomposition.decomposed_score == pytest.approx(0.2)

    def test_skill_undefined_without_uncertainty(self):
        """Test constant outcomes leave skill undefined."""
        decomposition = BrierDecomposition(
            n=4, nbins=20, brier_score=0.0, reliability=0.0, resolution=0.0, uncertainty=0.0
        )

        assert decomposition.skill_score is None
