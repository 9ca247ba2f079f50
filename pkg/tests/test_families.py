"""
Unit tests for solution families, theta ranges and exponent algebra.
"""

import math

import numpy as np
import pytest

from affine_lab.errors import ParameterRangeError
from affine_lab.families import (
    build_solution,
    critical_dimension_bounds,
    make_thm91,
    make_tw_r9,
    nonquadratic_example,
    riccati_phi,
    riccati_zeta_residual,
    solve_alpha_full,
    solve_alpha_halfspace,
    symmetric_F_min,
    symmetric_F_min_closed_form,
    theorem_range,
    theta_of_alpha,
    thm91_alphas,
)


class TestTheoremRange:
    """Test theta ranges of the solution theorems."""

    def test_describe(self):
        """Test range strings."""
        assert theorem_range("8.1", 2).describe() == "θ must lie in (0,1/2)"
        assert theorem_range("8.2", 3).describe() == "θ must lie in (0,1/4)"
        assert theorem_range("10.1", 4).describe() == "θ must lie in (1/2,3/4)"
        assert theorem_range("9.1", 3).describe() == "θ must equal 2/3"

    def test_out_of_range(self):
        """Test a theta outside the range names the theorem."""
        with pytest.raises(ParameterRangeError, match=r"θ must lie in \(0,1/2\) per Theorem 8\.1"):
            build_solution("8.1", 2, 0.6)

    def test_minimum_dimension(self):
        """Test the product theorems need N >= 3."""
        with pytest.raises(ParameterRangeError, match="needs N >= 3"):
            theorem_range("10.1", 2)

    def test_unknown_theorem(self):
        """Test an unknown theorem tag."""
        with pytest.raises(ValueError, match="Unknown theorem"):
            theorem_range("7.1", 3)

    def test_contains(self):
        """Test open ends are excluded."""
        rng = theorem_range("10.2", 3)

        assert rng.contains(0.6)
        assert not rng.contains(0.5)
        assert not rng.contains(2 / 3)


class TestConstructors:
    """Test family constructors."""

    def test_theta_required(self):
        """Test interval theorems need theta."""
        with pytest.raises(ParameterRangeError, match="theta is required"):
            build_solution("8.1", 3)

    def test_point_theorem_fixes_theta(self):
        """Test Theorem 9.1 fixes theta = (N-1)/N."""
        solution = build_solution("9.1", 4)

        assert solution.theta == pytest.approx(0.75)

    @pytest.mark.parametrize("variant", ["tw-paper", "tw-r9"])
    def test_tw_instance(self, variant):
        """Test the n = 9 instance lives at theta = 11/12 under both names."""
        solution = build_solution("9.1", 10, variant=variant)

        assert solution.theta == pytest.approx(11 / 12)
        assert solution.family.tag == make_tw_r9().tag
        assert solution.family.dim == 10

    def test_tw_instance_dimension(self):
        """Test the n = 9 instance only exists in N = 10."""
        with pytest.raises(ParameterRangeError, match="N=10"):
            build_solution("9.1", 9, variant="tw-paper")

    def test_unknown_theorem_variant(self):
        """Test a misspelled variant is rejected instead of falling back."""
        with pytest.raises(ValueError, match="Unknown variant: bogus"):
            build_solution("9.1", 10, variant="bogus")

    def test_variant_of_other_theorem(self):
        """Test the n = 9 instance is not available for other theorems."""
        with pytest.raises(ValueError, match="only applies to Theorem 9.1"):
            build_solution("10.2", 10, 0.6, variant="tw-paper")

    def test_thm91_branches(self):
        """Test the exponential branches."""
        assert thm91_alphas(2) == [2.0]
        assert thm91_alphas(3) == [2.0]
        assert thm91_alphas(4) == [2.0, 6.0]

    def test_thm91_rejects_alpha(self):
        """Test a non-branch alpha."""
        with pytest.raises(ParameterRangeError, match="alpha must be 2 or"):
            make_thm91(4, 3.0)

    def test_product_trace(self):
        """Test product families carry their solve trace."""
        solution = build_solution("10.2", 3, 0.6)

        assert solution.trace.method == "bisection"
        np.testing.assert_allclose(solution.family.alpha, [1.0, 1.0, 1.0], atol=1e-10)

    @pytest.mark.parametrize(
        "theta,theorem", [(0.3, "8.1"), (0.5, "9.1cor"), (0.6, "10.1"), (0.75, "9.1")]
    )
    def test_nonquadratic_example(self, theta, theorem):
        """Test the dispatch over theta in (0, (N-1)/N]."""
        assert nonquadratic_example(4, theta).theorem == theorem

    def test_nonquadratic_range(self):
        """Test theta above (N-1)/N is rejected."""
        with pytest.raises(ParameterRangeError):
            nonquadratic_example(3, 0.7)


class TestExponentAlgebra:
    """Test theta-alpha conditions."""

    def test_full_root(self):
        """Test s = 1 solves the full condition at theta = 3/5, N = 3."""
        alpha, trace = solve_alpha_full(0.6, 3)

        np.testing.assert_allclose(alpha, [1.0, 1.0, 1.0], atol=1e-10)
        assert trace.iterations > 0

    def test_theta_of_alpha_full(self):
        """Test theta of (1, 1, 1) in N = 3."""
        assert theta_of_alpha([1.0, 1.0, 1.0], 3, "full") == pytest.approx(0.6, abs=1e-12)

    @pytest.mark.parametrize("variant", ["halfspace", "full"])
    @pytest.mark.parametrize("N", [3, 4])
    def test_round_trip(self, variant, N):
        """Test theta_of_alpha inverts the solvers."""
        solver = solve_alpha_halfspace if variant == "halfspace" else solve_alpha_full
        rng = np.random.default_rng(5)
        for theta in rng.uniform(0.5, (N - 1) / N, size=20)[1:]:
            alpha, _ = solver(theta, N)
            assert theta_of_alpha(alpha, N, variant) == pytest.approx(theta, abs=1e-10)

    def test_halfspace_closed_form(self):
        """Test the half-space exponent formula."""
        alpha, trace = solve_alpha_halfspace(0.6, 3)
        expected = (4 * 0.6 - 2) * 2 / (3 * (2 - 0.6 * 3))

        np.testing.assert_allclose(alpha, [expected, expected])
        assert trace.method == "closed-form"

    def test_out_of_range(self):
        """Test the solvers enforce the product range."""
        with pytest.raises(ParameterRangeError, match="Theorem 10.2"):
            solve_alpha_full(0.7, 3)

    def test_unknown_variant(self):
        """Test an unknown variant."""
        with pytest.raises(ValueError, match="Unknown variant"):
            theta_of_alpha([1.0], 2, "slab")

    def test_symmetric_minimum(self):
        """Test the symmetric minimum against its closed form."""
        _, value = symmetric_F_min(0.8, 3)

        assert value == pytest.approx(symmetric_F_min_closed_form(0.8, 3), rel=1e-12)


class TestCriticalDimension:
    """Test critical dimension bounds."""

    @pytest.mark.parametrize(
        "theta,bounds", [(0.5, (1, 1)), (0.75, (2, 3)), (0.8, (3, 4)), (5 / 6, (4, 5))]
    )
    def test_table(self, theta, bounds):
        """Test the bounds at tabulated theta."""
        assert critical_dimension_bounds(theta) == bounds

    def test_range(self):
        """Test theta must lie in (0, 1)."""
        with pytest.raises(ParameterRangeError):
            critical_dimension_bounds(1.0)


class TestRiccati:
    """Test the Riccati branch."""

    @pytest.mark.parametrize("c3", [0.0, -math.inf])
    def test_closed_branches(self, c3):
        """Test the closed-form branches solve the Riccati equation."""
        phi = riccati_phi(2, 0.2, c3)
        t = np.array([0.5, 1.0, 1.5])

        np.testing.assert_allclose(riccati_zeta_residual(phi, 2, 0.2, t), 0.0, atol=1e-10)

    def test_quadrature_branch(self):
        """Test a negative c3 branch solves the Riccati equation."""
        phi = riccati_phi(2, 0.2, -1.0)
        t = np.array([0.5, 1.0, 1.5])

        np.testing.assert_allclose(riccati_zeta_residual(phi, 2, 0.2, t), 0.0, atol=1e-6)

    def test_quadrature_lower_limit(self):
        """Test the integration starts between the pole 1/c3 and 0 and matches phi''."""
        phi = riccati_phi(2, 0.2, -1.0)
        assert phi.pole < phi.lower < 0
        assert np.isfinite(phi.integrand(phi.lower))

        h, t = 1e-3, np.array([0.5, 1.0, 1.5])
        slope = (phi.derivatives(t + h)[1] - phi.derivatives(t - h)[1]) / (2 * h)
        np.testing.assert_allclose(slope, phi.derivatives(t)[2], rtol=1e-4)

    def test_rejects_positive_c3(self):
        """Test c3 > 0 is rejected."""
        with pytest.raises(ParameterRangeError, match="c3 must be"):
            riccati_phi(2, 0.2, 1.0)
