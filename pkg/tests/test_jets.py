"""
Unit tests for truncated Taylor jets.
"""

import math

import numpy as np
import pytest

from affine_lab.errors import JetDomainError
from affine_lab.jets import Jet, extract, fd_crosscheck, functions, seed_point, seed_variable


class TestJetArithmetic:
    """Test jet arithmetic and derivative extraction."""

    def test_polynomial_derivatives(self):
        """Test derivatives of x^2 y at (1, 2)."""
        x, y = seed_point([1.0, 2.0])
        jet = x * x * y

        assert jet.value == pytest.approx(2.0)
        np.testing.assert_allclose(extract(jet, "gradient"), [4.0, 1.0])
        np.testing.assert_allclose(extract(jet, "hessian"), [[4.0, 2.0], [2.0, 0.0]])
        assert jet.derivative((2, 1)) == pytest.approx(2.0)
        assert jet.derivative((0, 3)) == pytest.approx(0.0)

    def test_exponential_fourth_order(self):
        """Test fourth mixed derivative of exp(x + y)."""
        x, y = seed_point([1.0, 2.0])
        jet = functions.exp(x + y)

        assert jet.derivative((2, 2)) == pytest.approx(math.exp(3.0))

    def test_fractional_power(self):
        """Test derivatives of sqrt(x) at x = 4."""
        (x,) = seed_point([4.0])
        jet = x ** 0.5

        assert jet.value == pytest.approx(2.0)
        assert jet.derivative((1,)) == pytest.approx(0.25)
        assert jet.derivative((2,)) == pytest.approx(-1 / 32)

    def test_division(self):
        """Test derivatives of 1 / x at x = 2."""
        (x,) = seed_point([2.0])
        jet = 1.0 / x

        assert jet.derivative((1,)) == pytest.approx(-0.25)
        assert jet.derivative((3,)) == pytest.approx(-6 / 16)

    def test_batched_points(self):
        """Test one jet carrying expansions at several points."""
        x, y = seed_point(np.array([[1.0, 2.0], [3.0, 4.0]]))
        jet = x * y

        np.testing.assert_allclose(jet.value, [2.0, 12.0])
        np.testing.assert_allclose(extract(jet, "gradient"), [[2.0, 1.0], [4.0, 3.0]])
        assert jet.batch_shape == (2,)

    def test_constant_jet(self):
        """Test a constant jet has vanishing derivatives."""
        jet = Jet.constant(3.0, 2)

        assert jet.value == 3.0
        np.testing.assert_allclose(extract(jet, "gradient"), [0.0, 0.0])


class TestJetStructure:
    """Test truncation and differentiation."""

    def test_truncate(self):
        """Test truncation lowers the order."""
        x, y = seed_point([1.0, 2.0])
        jet = (x * y).truncate(2)

        assert jet.order == 2
        with pytest.raises(ValueError, match="Cannot raise jet order"):
            jet.truncate(3)

    def test_differentiate(self):
        """Test partial differentiation of x^2 y."""
        x, y = seed_point([1.0, 2.0])
        dx = (x * x * y).differentiate(0)

        assert dx.order == 3
        assert dx.value == pytest.approx(4.0)
        assert dx.derivative((1, 0)) == pytest.approx(4.0)

    def test_seed_variable_range(self):
        """Test seeding a variable outside the dimension."""
        with pytest.raises(ValueError, match="out of range"):
            seed_variable(2, 1.0, 2)


class TestJetDomain:
    """Test domain errors."""

    def test_log_of_negative(self):
        """Test log of a negative jet raises."""
        (x,) = seed_point([-1.0])
        with pytest.raises(JetDomainError, match="positive"):
            functions.log(x)

    def test_fractional_power_of_zero(self):
        """Test a fractional power at zero raises."""
        (x,) = seed_point([0.0])
        with pytest.raises(JetDomainError):
            x ** 1.5

    def test_power_on_arrays(self):
        """Test the array path of power checks its domain."""
        with pytest.raises(JetDomainError, match="nonnegative"):
            functions.power(np.array([-1.0, 1.0]), 0.5)


class TestFiniteDifferenceCrosscheck:
    """Test the finite-difference cross-check."""

    @pytest.mark.parametrize("order", [1, 2, 3])
    def test_agreement(self, order):
        """Test jets agree with central differences."""

        def field(c):
            return functions.exp(c[0]) * c[1] * c[1]

        assert fd_crosscheck(field, [0.3, 0.5], order, 1e-3) < 1e-4
