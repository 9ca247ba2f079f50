"""
Unit tests for the radial power counterexample.
"""

import math

import pytest

from affine_lab.errors import ParameterRangeError
from affine_lab.inequalities import power_counterexample


class TestPowerCounterexample:
    """Test cases for |x|^beta - 1 with 1 < beta < 1 + alpha."""

    def test_mass_and_trend(self):
        """The mass is the area of the gradient image, pi beta^2, while Du fails C^{0.3}."""
        result = power_counterexample(1.1, 0.3, N=2, levels=3)
        assert result.mass.value == pytest.approx(math.pi * 1.1 ** 2, rel=1e-8)
        assert result.mass.method == "radial"
        assert result.mass_stable
        assert result.trend.values[-1] > result.trend.values[0]

    def test_graded_levels(self):
        """The graded ball quadrature reproduces the exact mass."""
        result = power_counterexample(1.2, 0.3, N=2, levels=2)
        for value in result.mass_levels:
            assert value == pytest.approx(math.pi * 1.2 ** 2, rel=1e-2)

    def test_to_dict(self):
        """The bundle carries mass history and the trend rows."""
        data = power_counterexample(1.1, 0.3, N=2, levels=2).to_dict()
        assert data["beta"] == 1.1
        assert len(data["mass_levels"]) == 2
        assert len(data["trend"]) == 2
        assert "trend_growing" in data

    def test_beta_range(self):
        """beta must lie in (1, 1 + alpha)."""
        with pytest.raises(ParameterRangeError, match="beta"):
            power_counterexample(1.5, 0.3)
        with pytest.raises(ParameterRangeError, match="beta"):
            power_counterexample(1.0, 0.3)

    def test_alpha_range(self):
        """alpha must lie in (0, 1)."""
        with pytest.raises(ParameterRangeError, match="alpha"):
            power_counterexample(1.1, 1.0)
