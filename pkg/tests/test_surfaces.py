"""
Unit tests for convex families, curves and domains.
"""

import math

import numpy as np
import pytest

from affine_lab.errors import DomainViolation, ParameterRangeError
from affine_lab.surfaces import (
    Ball,
    Box,
    Cone,
    CoordinatePower,
    Ellipsoid,
    ExpPower,
    PowerCurve,
    PowerRadial,
    ProductFull,
    ProductHalfSpace,
    Quadratic,
    domain_from_dict,
    domain_geometry,
    family_from_dict,
    sphere_area,
    sphere_rule,
)


class TestQuadratic:
    """Test Quadratic family."""

    def test_value_and_hessian(self, paraboloid):
        """Test u = |x|^2 - 1 evaluates correctly."""
        assert paraboloid.value([0.5, 0.5]) == pytest.approx(-0.5)
        np.testing.assert_allclose(paraboloid.gradient([0.5, 0.0]), [1.0, 0.0])
        np.testing.assert_allclose(paraboloid.hessian([0.1, 0.2]), 2 * np.eye(2))

    def test_closed_form_det(self, paraboloid):
        """Test closed-form determinant against the jet Hessian."""
        points = np.array([[0.1, 0.2], [-0.3, 0.4]])
        np.testing.assert_allclose(paraboloid.dets(points), paraboloid.closed_form_det(points))
        assert paraboloid.closed_form_det([0.0, 0.0]) == pytest.approx(4.0)

    def test_rejects_indefinite(self):
        """Test an indefinite Q is rejected."""
        with pytest.raises(ParameterRangeError, match="positive semidefinite"):
            Quadratic(np.diag([1.0, -1.0]))

    def test_strictly_convex(self, paraboloid):
        """Test convexity classification."""
        assert paraboloid.is_convex_at([0.3, 0.1]).strictly_convex


class TestClosedFormDeterminants:
    """Test closed-form determinants agree with the jets."""

    @pytest.mark.parametrize(
        "family,point",
        [
            (PowerRadial(3.0, 2), [0.3, -0.4]),
            (PowerRadial(1.5, 3), [0.2, 0.1, -0.3]),
            (ExpPower(2.0, 2), [0.3, -0.2, 0.5]),
            (ExpPower(3.0, 1), [0.7, 0.1]),
            (ProductFull([1.0, 1.0, 1.0]), [0.5, 1.0, 1.5]),
            (ProductHalfSpace([0.5, 1.5]), [0.8, 1.2, 0.3]),
        ],
    )
    def test_det_matches(self, family, point):
        """Test det D^2u from jets equals the closed form."""
        jet_det = family.dets(np.array([point]))[0]
        assert jet_det == pytest.approx(family.closed_form_det(point), rel=1e-10)


class TestSingularFamilies:
    """Test families with excluded minimum points."""

    def test_power_radial_excludes_center(self, cubic_radial):
        """Test the radial center is not admissible."""
        assert not cubic_radial.contains([0.0, 0.0])
        assert cubic_radial.contains([0.1, 0.0])

    def test_power_radial_rejects_beta(self):
        """Test beta must exceed 1."""
        with pytest.raises(ParameterRangeError, match="beta must exceed 1"):
            PowerRadial(1.0, 2)

    def test_cone_atom(self):
        """Test the cone carries its mass at the apex."""
        cone = Cone(2)
        (apex, mass), = cone.atoms()

        np.testing.assert_allclose(apex, [0.0, 0.0])
        assert mass == pytest.approx(math.pi)

    def test_tangent_at_apex(self):
        """Test the zero subgradient is used at a singular minimum."""
        value, grad = Cone(2).tangent([0.0, 0.0])

        assert value == pytest.approx(-1.0)
        np.testing.assert_allclose(grad, [0.0, 0.0])

    def test_outside_domain(self):
        """Test evaluating outside the admissible domain raises."""
        with pytest.raises(DomainViolation, match="outside the admissible domain"):
            ProductFull([1.0, 1.0]).values(np.array([[-0.5, 1.0]]))

    def test_degenerate_hessian(self):
        """Test a flat direction is classified as degenerate."""
        report = CoordinatePower(2, 0, 4).is_convex_at([1.0, 0.0])

        assert report.status == "degenerate"


class TestSampling:
    """Test random admissible points."""

    def test_sample_points(self, rng):
        """Test samples are admissible and of the right shape."""
        family = ProductHalfSpace([1.0, 2.0])
        points = family.sample_points(rng, 50)

        assert points.shape == (50, 3)
        assert np.all(family.contains(points))

    def test_sample_points_deterministic(self):
        """Test equal seeds give equal samples."""
        family = ExpPower(2.0, 2)
        a = family.sample_points(np.random.default_rng(3), 20)
        b = family.sample_points(np.random.default_rng(3), 20)

        np.testing.assert_array_equal(a, b)


class TestCurves:
    """Test scalar curves."""

    def test_power_curve_derivatives(self):
        """Test derivatives of 2 t^3."""
        stack = PowerCurve(2.0, 3).derivatives(np.array([2.0]))

        assert [float(d[0]) for d in stack] == pytest.approx([16.0, 24.0, 24.0, 12.0, 0.0])

    def test_power_curve_domain(self):
        """Test a negative exponent restricts the domain."""
        curve = PowerCurve(1.0, -1)
        with pytest.raises(DomainViolation):
            curve(np.array([-1.0]))


class TestDomains:
    """Test bounded domains."""

    def test_ball_quadrature_volume(self, unit_disk):
        """Test ball quadrature weights sum to the area."""
        _, weights = unit_disk.quadrature(0)

        assert np.sum(weights) == pytest.approx(math.pi, rel=1e-12)
        assert unit_disk.volume() == pytest.approx(math.pi)

    def test_sphere_rule_area(self):
        """Test sphere weights sum to the sphere area."""
        _, weights = sphere_rule(3)

        assert np.sum(weights) == pytest.approx(sphere_area(3), rel=1e-12)

    def test_ball_dilate(self, unit_disk):
        """Test homothetic dilation of a ball."""
        small = unit_disk.dilate([0.5, 0.0], 0.5)

        np.testing.assert_allclose(small.center, [0.25, 0.0])
        assert small.radius == pytest.approx(0.5)

    def test_box_dilate(self):
        """Test homothetic dilation of a box."""
        box = Box([0.0, 0.0], [2.0, 2.0]).dilate([0.0, 0.0], 0.5)

        np.testing.assert_allclose(box.lower, [0.0, 0.0])
        np.testing.assert_allclose(box.upper, [1.0, 1.0])

    def test_ellipsoid_dilate(self):
        """Test dilating an ellipsoid scales its volume by sigma^N."""
        ellipsoid = Ellipsoid([0.0, 0.0], [[2.0, 0.5], [0.0, 0.5]])

        assert ellipsoid.volume() == pytest.approx(math.pi)
        assert ellipsoid.dilate([0.0, 0.0], 0.5).volume() == pytest.approx(math.pi / 4)

    def test_dilate_rejects_sigma(self, unit_disk):
        """Test the dilation factor must lie in (0, 1]."""
        with pytest.raises(ValueError, match="Dilation factor"):
            unit_disk.dilate([0.0, 0.0], 0.0)

    def test_box_geometry(self):
        """Test diameter, inradius and volume of a box."""
        geometry = domain_geometry(Box([0.0, 0.0], [2.0, 1.0]))

        assert geometry.diameter == pytest.approx(math.sqrt(5))
        assert geometry.inradius == pytest.approx(0.5)
        assert geometry.volume == pytest.approx(2.0)


class TestRegistry:
    """Test family and domain documents."""

    def test_family_document(self):
        """Test a family rebuilt from its document evaluates identically."""
        family = ProductHalfSpace([0.5, 1.5])
        rebuilt = family_from_dict(family.to_dict())
        point = np.array([[0.8, 1.2, 0.3]])

        assert rebuilt.tag == "product-halfspace"
        np.testing.assert_allclose(rebuilt.values(point), family.values(point))

    def test_domain_document(self, unit_disk):
        """Test a domain rebuilt from its document."""
        rebuilt = domain_from_dict(unit_disk.to_dict())

        assert isinstance(rebuilt, Ball)
        assert rebuilt.radius == 1.0

    def test_unknown_family(self):
        """Test an unknown tag is rejected."""
        with pytest.raises(ValueError, match="Unknown family"):
            family_from_dict({"family": "hyperboloid", "dim": 2})

    def test_missing_parameter(self):
        """Test a missing parameter is named."""
        with pytest.raises(ValueError, match="missing parameter"):
            family_from_dict({"family": "exp-power", "n": 2})
