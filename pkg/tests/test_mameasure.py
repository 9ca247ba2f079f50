"""
Unit tests for Monge-Ampere mass, normal images, sections and John normalization.
"""

import math

import numpy as np
import pytest

from affine_lab.errors import (
    ConvexityViolation,
    DegenerateSetError,
    FlatDirectionError,
)
from affine_lab.mameasure import (
    PLConvex,
    average_density,
    doubling_ratio,
    halving_exponent,
    halving_ratio,
    integrate_det,
    john_normalize,
    level_set,
    ma_mass,
    minimum_point,
    normal_image_area,
    ring_cell_volume,
    sublevel,
)
from affine_lab.surfaces import Ball, Box, Cone, Quadratic


class TestMass:
    """Test cases for ma_mass and integrate_det."""

    def test_paraboloid_mass(self, paraboloid, unit_disk):
        """det D^2(|x|^2 - 1) = 4 integrates to 4 pi on the unit disk."""
        report = ma_mass(paraboloid, unit_disk)
        assert report.value == pytest.approx(4 * math.pi, rel=1e-10)
        assert report.method == "quadrature"
        assert len(report.levels) == 3
        assert report.error_estimate < 1e-10

    def test_radial_path(self, cubic_radial, unit_disk):
        """|x|^3 has det 18 r^2 in the plane, mass 9 pi."""
        report = ma_mass(cubic_radial, unit_disk)
        assert report.method == "radial"
        assert report.value == pytest.approx(9 * math.pi, rel=1e-10)

    def test_off_center_ball_uses_quadrature(self, cubic_radial):
        """A ball not centered at the radial center falls back to quadrature."""
        report = ma_mass(cubic_radial, Ball([0.5, 0.0], 0.25), levels=2)
        assert report.method == "quadrature"
        assert report.value > 0

    def test_cone_atom(self, unit_disk):
        """All of the cone's mass sits at its apex."""
        report = ma_mass(Cone(2), unit_disk)
        assert report.value == pytest.approx(math.pi)
        assert report.error_estimate == 0.0

    def test_cone_atom_outside_domain(self):
        """A domain away from the apex carries no mass."""
        assert integrate_det(Cone(2), Ball([3.0, 0.0], 1.0)) == 0.0

    def test_box_mass(self):
        """Constant density times box volume."""
        u = Quadratic(np.diag([2.0, 6.0]))
        report = ma_mass(u, Box([0.0, 0.0], [2.0, 0.5]))
        assert report.value == pytest.approx(12.0, rel=1e-10)

    def test_dimension_mismatch(self, paraboloid):
        """Family and domain dimensions must agree."""
        with pytest.raises(ValueError, match="does not match"):
            ma_mass(paraboloid, Ball(np.zeros(3), 1.0))

    def test_levels_must_be_positive(self, paraboloid, unit_disk):
        """At least one quadrature level is required."""
        with pytest.raises(ValueError, match="at least one"):
            ma_mass(paraboloid, unit_disk, levels=0)

    def test_workers_do_not_change_mass(self, paraboloid, unit_disk):
        """The worker pool only partitions the nodes."""
        serial = integrate_det(paraboloid, unit_disk, 1, workers=1)
        pooled = integrate_det(paraboloid, unit_disk, 1, workers=4)
        assert serial == pooled


class TestNormalImage:
    """Test cases for the discrete normal image."""

    def test_paraboloid_image(self, normalized_paraboloid, unit_disk):
        """The gradient image of |x|^2 over the unit disk is the disk of radius 2."""
        p = PLConvex.from_family(normalized_paraboloid, unit_disk, nodes=129)
        area = normal_image_area(p, unit_disk)
        assert area == pytest.approx(4 * math.pi, rel=0.05)

    def test_cone_image(self, unit_disk):
        """The apex of a unit cone images onto the unit disk."""
        p = PLConvex.from_family(Cone(2), unit_disk, nodes=129)
        assert normal_image_area(p, unit_disk) == pytest.approx(math.pi, rel=0.05)

    def test_ring_cell(self, normalized_paraboloid, unit_disk):
        """An interior node of |x|^2 owns a square of side 2h."""
        p = PLConvex.from_family(normalized_paraboloid, unit_disk, nodes=33)
        h = p.spacing[0]
        assert ring_cell_volume(p, (16, 16)) == pytest.approx(4 * h * h, rel=1e-9)
        assert ring_cell_volume(p, (10, 20)) == pytest.approx(4 * h * h, rel=1e-9)

    def test_ring_cell_needs_interior_node(self, normalized_paraboloid, unit_disk):
        """Edge nodes have no full 1-ring."""
        p = PLConvex.from_family(normalized_paraboloid, unit_disk, nodes=17)
        with pytest.raises(ValueError, match="1-ring"):
            ring_cell_volume(p, (0, 5))

    def test_nonconvex_data_rejected(self):
        """A concave profile fails the second-difference check."""
        axis = np.linspace(-1.0, 1.0, 9)
        with pytest.raises(ConvexityViolation):
            PLConvex([axis], -(axis ** 2))

    def test_convex_data_accepted(self):
        """Convex nodal data has no defect."""
        axis = np.linspace(-1.0, 1.0, 9)
        p = PLConvex([axis], np.abs(axis))
        assert p.convexity_defect() == 0.0
        assert p.shape == (9,)

    def test_shape_mismatch(self):
        """Values must match the grid axes."""
        axis = np.linspace(0.0, 1.0, 5)
        with pytest.raises(ValueError, match="do not match"):
            PLConvex([axis, axis], np.zeros((5, 4)))


class TestSublevel:
    """Test cases for sections and their measurements."""

    def test_unit_section(self, normalized_paraboloid):
        """S(0, 1) of |x|^2 is the unit disk."""
        S = sublevel(normalized_paraboloid, [0.0, 0.0], 1.0)
        np.testing.assert_allclose(S.polytope.radii, 1.0, rtol=1e-8)
        assert S.diameter == pytest.approx(2.0, rel=1e-3)
        assert S.volume == pytest.approx(math.pi, rel=1e-3)

    def test_section_is_affine_invariant_of_base(self, normalized_paraboloid):
        """Subtracting the tangent plane makes every section of |x|^2 a unit disk."""
        S = sublevel(normalized_paraboloid, [0.4, -0.3], 1.0)
        np.testing.assert_allclose(S.polytope.radii, 1.0, rtol=1e-8)

    def test_nonpositive_height(self, normalized_paraboloid):
        """Heights must be positive."""
        with pytest.raises(ValueError, match="positive"):
            sublevel(normalized_paraboloid, [0.0, 0.0], 0.0)

    def test_cone_section_at_apex(self):
        """The zero subgradient at the apex gives S = B(0, 1)."""
        S = sublevel(Cone(2), [0.0, 0.0], 1.0)
        np.testing.assert_allclose(S.polytope.radii, 1.0, rtol=1e-8)

    @pytest.mark.parametrize("dim", [2, 3])
    @pytest.mark.parametrize("sigma", [0.3, 0.5, 0.7])
    def test_doubling_on_quadratics(self, dim, sigma):
        """Constant density makes the doubling ratio sigma^(-N)."""
        u = Quadratic(2 * np.eye(dim))
        S = sublevel(u, np.zeros(dim), 1.0)
        assert doubling_ratio(u, S, sigma) == pytest.approx(sigma ** (-dim), rel=1e-8)

    def test_doubling_sigma_range(self, normalized_paraboloid):
        """sigma must lie strictly between 0 and 1."""
        S = sublevel(normalized_paraboloid, [0.0, 0.0], 1.0)
        with pytest.raises(ValueError, match="sigma"):
            doubling_ratio(normalized_paraboloid, S, 1.0)

    def test_average_density(self, normalized_paraboloid):
        """The mean of a constant density is the constant."""
        S = sublevel(normalized_paraboloid, [0.0, 0.0], 1.0)
        assert average_density(normalized_paraboloid, S) == pytest.approx(4.0, rel=1e-10)

    def test_dilation_about_base_point(self, normalized_paraboloid):
        """sigma S keeps x0 and scales every ray."""
        S = sublevel(normalized_paraboloid, [0.2, 0.1], 0.5)
        half = S.dilate(0.5)
        np.testing.assert_allclose(half.center, [0.2, 0.1])
        np.testing.assert_allclose(half.radii, 0.5 * S.polytope.radii)

    def test_to_dict(self, normalized_paraboloid):
        """The section serializes its rays."""
        data = sublevel(normalized_paraboloid, [0.0, 0.0], 1.0, resolution=16).to_dict()
        assert data["t"] == 1.0
        assert len(data["radii"]) == 16
        assert len(data["directions"]) == 16


class TestHalving:
    """Test cases for the halving ratio."""

    def test_quadratic_ratio(self, normalized_paraboloid):
        """v(z/2) / v(z) = 1/4 for a quadratic."""
        assert halving_ratio(normalized_paraboloid, [0.3, 0.1], [0.5, 0.5]) == pytest.approx(0.25)

    def test_quadratic_exponent(self, normalized_paraboloid):
        """The exponent of a quadratic is 2 at every scale."""
        table = halving_exponent(normalized_paraboloid, [0.0, 0.0], [1.0, 0.0], levels=5)
        assert table.label == "halving_exponent"
        np.testing.assert_allclose(table.values, 2.0, rtol=1e-9)
        np.testing.assert_allclose(table.scales, [1.0, 0.5, 0.25, 0.125, 0.0625])

    def test_cubic_exponent(self, cubic_radial):
        """|x|^3 at its center halves with exponent 3."""
        table = halving_exponent(cubic_radial, [0.0, 0.0], [0.8, 0.0], levels=4)
        np.testing.assert_allclose(table.values, 3.0, rtol=1e-9)

    def test_cone_exponent(self):
        """The cone at its apex is Lipschitz only."""
        table = halving_exponent(Cone(2), [0.0, 0.0], [0.0, 1.0], levels=3)
        np.testing.assert_allclose(table.values, 1.0, rtol=1e-9)

    def test_flat_direction(self):
        """v vanishing along z is reported."""
        u = Quadratic(np.diag([2.0, 0.0]))
        with pytest.raises(FlatDirectionError):
            halving_ratio(u, [0.0, 0.0], [0.0, 1.0])


class TestJohn:
    """Test cases for the affine normalization."""

    def test_disk_is_round(self, normalized_paraboloid):
        """A disk is already in John position."""
        S = sublevel(normalized_paraboloid, [0.0, 0.0], 1.0)
        john = john_normalize(S)
        assert 1.0 <= john.rho < 1.05
        assert abs(np.linalg.det(john.matrix)) == pytest.approx(1.0, rel=1e-9)

    def test_ellipse_is_rounded(self):
        """An elongated section maps to a nearly round body about the origin."""
        u = Quadratic(np.diag([2.0, 50.0]))
        S = sublevel(u, [0.0, 0.0], 1.0)
        john = john_normalize(S)
        assert john.rho < 1.05
        mapped = john.apply(S.boundary_points())
        radii = np.linalg.norm(mapped, axis=1)
        assert np.max(radii) / np.min(radii) < 1.1
        np.testing.assert_allclose(john.apply(john.center), [[0.0, 0.0]], atol=1e-12)

    def test_point_cloud(self):
        """Raw boundary points are accepted."""
        square = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
        john = john_normalize(square)
        assert john.rho == pytest.approx(2 ** 0.25, rel=1e-2)

    @pytest.mark.parametrize("dim,seed", [(2, 0), (2, 1), (3, 2)])
    def test_affine_equivariance(self, dim, seed):
        """An affine image of a body has the same sandwich ratio and normalized shape."""
        rng = np.random.default_rng(seed)
        points = rng.normal(size=(20, dim))
        T0 = rng.normal(size=(dim, dim)) + 2 * np.eye(dim)
        moved = points @ T0.T + rng.normal(size=dim)

        john, moved_john = john_normalize(points), john_normalize(moved)
        assert moved_john.rho == pytest.approx(john.rho, rel=1e-6)
        np.testing.assert_allclose(
            np.linalg.norm(moved_john.apply(moved), axis=1),
            np.linalg.norm(john.apply(points), axis=1),
            rtol=1e-6,
        )

    def test_flat_body(self):
        """Collinear points span no body."""
        line = np.column_stack([np.linspace(0, 1, 5), np.zeros(5)])
        with pytest.raises(DegenerateSetError):
            john_normalize(line)


class TestLevelSet:
    """Test cases for level_set and minimum_point."""

    def test_paraboloid_level_zero(self, paraboloid):
        """{|x|^2 - 1 < 0} is the unit disk."""
        body = level_set(paraboloid, [0.0, 0.0], 0.0)
        np.testing.assert_allclose(body.radii, 1.0, rtol=1e-8)

    def test_start_must_be_below_level(self, paraboloid):
        """The interior point must lie in the set."""
        with pytest.raises(ValueError, match="not below"):
            level_set(paraboloid, [2.0, 0.0], 0.0)

    def test_smooth_minimum(self):
        """Q x + b = 0 at the minimizer."""
        u = Quadratic(2 * np.eye(2), b=[-2.0, 1.0])
        x = minimum_point(u, Ball(np.zeros(2), 3.0))
        np.testing.assert_allclose(x, [1.0, -0.5], atol=1e-5)

    def test_singular_minimum(self, unit_disk):
        """The apex of a cone is returned exactly."""
        np.testing.assert_array_equal(minimum_point(Cone(2), unit_disk), [0.0, 0.0])
