"""
Unit tests for the affine maximal type operator and its reductions.
"""

import numpy as np
import pytest

from affine_lab.errors import DegenerateHessianError
from affine_lab.families import build_solution, make_thm81, make_thm82
from affine_lab.operator import (
    divergence_residual,
    max_normalized_residual,
    product_full_residual,
    product_full_scale,
    product_halfspace_residual,
    product_halfspace_scale,
    residual,
    residual_batch,
    tw_exponential_condition,
    tw_exponential_residual,
    w_value,
    warren_residual,
)
from affine_lab.operator.residual import _cholesky_inverse
from affine_lab.surfaces import (
    AffineImage,
    ExpPower,
    PowerCurve,
    PowerRadial,
    ProductFull,
    ProductHalfSpace,
    Quadratic,
    TWSeparable,
)

RESIDUAL_TOL = 1e-7
AGREEMENT_RTOL = 1e-8

SOLUTIONS = [
    ("8.1", 2, 0.1, None, None),
    ("8.1", 3, 0.3, None, None),
    ("8.1", 5, 0.45, None, None),
    ("8.2", 2, 0.2, None, None),
    ("8.2", 3, 0.225, None, None),
    ("9.1", 2, None, None, 2.0),
    ("9.1", 3, None, None, 2.0),
    ("9.1", 4, None, None, 6.0),
    ("9.1", 10, None, "tw-paper", None),
    ("9.1cor", 3, None, None, None),
    ("9.1cor", 4, None, None, None),
    ("10.1", 3, 0.55, None, None),
    ("10.1", 4, 0.6, None, None),
    ("10.2", 3, 0.55, None, None),
    ("10.2", 3, 0.6, None, None),
]


class TestResidual:
    """Test the generic jet residual."""

    def test_quadratic_is_exact(self):
        """Test a quadratic has vanishing residual."""
        report = residual(Quadratic(np.diag([1.0, 2.0, 3.0])), 0.4, [0.1, 0.2, 0.3])

        assert report.raw == 0.0
        assert report.normalized == 0.0
        assert report.det == pytest.approx(6.0)

    def test_w_value(self):
        """Test w = det^(-theta)."""
        assert w_value(Quadratic(4 * np.eye(2)), 0.5, [0.0, 0.0]) == pytest.approx(0.25)

    @pytest.mark.parametrize("theorem,N,theta,variant,alpha", SOLUTIONS)
    def test_solution_families(self, theorem, N, theta, variant, alpha):
        """Test every solution theorem passes the residual gate."""
        solution = build_solution(theorem, N, theta, variant, alpha)
        points = solution.family.sample_points(np.random.default_rng(1), 40)

        assert max_normalized_residual(solution.family, solution.theta, points) <= RESIDUAL_TOL

    def test_non_solution(self):
        """Test |x|^4 does not solve the equation at theta = 0.3."""
        report = residual(PowerRadial(4.0, 2, constant=0.0), 0.3, [0.5, 0.3])

        assert abs(report.normalized) > 1e-2

    def test_batch_matches_single(self):
        """Test batched residuals equal pointwise ones."""
        family = ExpPower(2.0, 2)
        points = np.array([[0.3, -0.2, 0.5], [0.1, 0.4, -0.2]])
        batch = residual_batch(family, 0.5, points)

        for report, point in zip(batch, points):
            assert report.raw == pytest.approx(residual(family, 0.5, point).raw, abs=1e-12)

    def test_batch_independent_of_workers(self):
        """Test worker count does not change results."""
        family = ProductFull([1.0, 1.0, 1.0])
        points = family.sample_points(np.random.default_rng(2), 150)
        serial = residual_batch(family, 0.55, points, workers=1)
        pooled = residual_batch(family, 0.55, points, workers=4)

        assert [r.to_row() for r in serial] == [r.to_row() for r in pooled]

    def test_degenerate_hessian(self):
        """Test a non-convex point is rejected."""
        with pytest.raises(DegenerateHessianError):
            residual(Quadratic(np.diag([1.0, 0.0])), 0.5, [0.1, 0.1])

    def test_indefinite_hessian(self):
        """Test a saddle fails the Cholesky factorization."""
        with pytest.raises(DegenerateHessianError, match="not positive definite"):
            residual(Quadratic(np.diag([1.0, -1.0])), 0.5, [0.1, 0.1])

    def test_cholesky_inverse(self):
        """Test the factored inverse matches a direct inverse on SPD Hessians."""
        rng = np.random.default_rng(4)
        M = rng.normal(size=(6, 3, 3))
        hessians = M @ M.transpose(0, 2, 1) + 0.5 * np.eye(3)

        np.testing.assert_allclose(
            _cholesky_inverse(hessians), np.linalg.inv(hessians), rtol=1e-10, atol=1e-12
        )

    def test_divergence_form(self):
        """Test the divergence form equals det times the non-divergence form."""
        divergence, product = divergence_residual(ExpPower(3.0, 2), 0.4, [0.5, 0.3, 0.1])

        assert divergence == pytest.approx(product, rel=1e-8)


class TestReductions:
    """Test closed-form reductions against the generic residual."""

    def test_warren(self):
        """Test the Warren reduction off the solution theta."""
        u = make_thm82(3, 0.2)
        theta = 0.15
        x = np.array([0.4, -0.3, 1.1])
        predicted = warren_residual(u.eta, u.phi, theta, 2, x[:-1], x[-1])

        assert predicted == pytest.approx(residual(u, theta, x).raw, rel=AGREEMENT_RTOL)

    def test_tw_exponential(self):
        """Test the exponential reduction at a non-branch alpha."""
        x = np.array([0.5, 0.4, 0.2])
        predicted = tw_exponential_residual(3.0, 2 / 3, 2, x[:-1], x[-1])

        assert predicted == pytest.approx(
            residual(ExpPower(3.0, 2), 2 / 3, x).raw, rel=AGREEMENT_RTOL
        )

    @pytest.mark.parametrize("alpha,n", [(2.0, 2), (6.0, 3)])
    def test_tw_branches_vanish(self, alpha, n):
        """Test both coefficients vanish on the solution branches."""
        B1, B2 = tw_exponential_condition(alpha, n / (n + 1), n)

        assert B1 == pytest.approx(0.0, abs=1e-12)
        assert B2 == pytest.approx(0.0, abs=1e-12)

    def test_product_halfspace(self):
        """Test the half-space product condition with its scale."""
        alpha, theta, N = [1.0, 2.0], 0.6, 3
        x = np.array([0.7, 1.3, 0.4])
        predicted = product_halfspace_residual(alpha, theta, N) * product_halfspace_scale(
            alpha, theta, N, x
        )

        assert predicted == pytest.approx(
            residual(ProductHalfSpace(alpha), theta, x).raw, rel=AGREEMENT_RTOL
        )

    def test_product_full(self):
        """Test the full product condition with its scale."""
        alpha, theta, N = [0.5, 1.0, 2.0], 0.62, 3
        y = np.array([0.7, 1.3, 0.9])
        predicted = product_full_residual(alpha, theta, N) * product_full_scale(
            alpha, theta, N, y
        )

        assert predicted == pytest.approx(
            residual(ProductFull(alpha), theta, y).raw, rel=AGREEMENT_RTOL
        )

    def test_product_full_solution(self):
        """Test (1, 1, 1) solves the full product condition at theta = 3/5."""
        assert product_full_residual([1.0, 1.0, 1.0], 0.6, 3) == pytest.approx(0.0, abs=1e-12)


def _rotation(rng, n):
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def _unimodular(rng, N):
    M = rng.normal(size=(N, N)) + N * np.eye(N)
    det = np.linalg.det(M)
    if det < 0:
        M[0] *= -1
    return M / abs(det) ** (1.0 / N)


class TestInvariance:
    """Test symmetries of the residual."""

    @pytest.mark.parametrize(
        "family,theta",
        [
            (make_thm81(3, 0.3), 0.35),
            (make_thm82(3, 0.2), 0.25),
            (TWSeparable(PowerCurve(1.0, 9), PowerCurve(1.0, -1), 3), 0.8),
        ],
    )
    def test_rotation_in_y(self, family, theta):
        """Test residual and determinant are unchanged under (y, t) -> (Ry, t)."""
        rng = np.random.default_rng(3)
        for x in family.sample_points(rng, 5):
            R = _rotation(rng, family.dim - 1)
            rotated = np.append(R @ x[:-1], x[-1])
            before, after = residual(family, theta, x), residual(family, theta, rotated)

            assert after.det == pytest.approx(before.det, rel=1e-10)
            assert after.raw == pytest.approx(before.raw, rel=1e-9, abs=1e-12 * before.scale)

    @pytest.mark.parametrize(
        "theorem,theta",
        [(None, 0.4), ("10.1", 0.55), ("10.2", 0.6)],
    )
    def test_unimodular_image_of_solution(self, theorem, theta):
        """Test u(Ax) + l(x) with det A = 1 still solves the equation."""
        rng = np.random.default_rng(5)
        if theorem is None:
            base = Quadratic(np.diag([1.0, 2.0, 3.0]))
        else:
            base = build_solution(theorem, 3, theta).family
        A = _unimodular(rng, 3)
        image = AffineImage(base, A, linear=rng.normal(size=3), constant=0.7)
        points = np.linalg.solve(A, base.sample_points(rng, 10).T).T

        assert np.linalg.det(A) == pytest.approx(1.0)
        assert max_normalized_residual(image, theta, points) <= RESIDUAL_TOL

    def test_unimodular_image_keeps_raw_residual(self):
        """Test a unimodular change of variables leaves det D^2u and the raw residual alone."""
        rng = np.random.default_rng(7)
        base = make_thm81(3, 0.3)
        A = _unimodular(rng, 3)
        image = AffineImage(base, A, linear=[0.3, -0.2, 0.1], constant=-1.0)
        for p in base.sample_points(rng, 5):
            x = np.linalg.solve(A, p)
            before, after = residual(base, 0.35, p), residual(image, 0.35, x)

            assert after.det == pytest.approx(before.det, rel=1e-9)
            assert after.raw == pytest.approx(before.raw, rel=1e-8, abs=1e-12 * before.scale)
