"""
The catalogue of convex families.

Coordinates follow x = (y, t) with y in R^n and t the last coordinate
(N = n + 1) for the separable and product families; the slab family uses
x = (x1, x') with x1 the first coordinate.
"""

import logging
import math
from typing import Any, Sequence

import numpy as np
from scipy.special import gamma as gamma_fn

from affine_lab.errors import ParameterRangeError
from affine_lab.jets.functions import exp, power, sqrt, square_norm
from .base import ConvexFamily, margin
from .curves import ScalarCurve

logger = logging.getLogger(__name__)


def unit_ball_volume(dim: int) -> float:
    """omega_N = |B_1| in R^N."""
    return math.pi ** (dim / 2) / float(gamma_fn(dim / 2 + 1))


def _curve_ok(curve: ScalarCurve, t: np.ndarray) -> np.ndarray:
    return curve.contains(t, margin(t))


def _dot(row: np.ndarray, coords: Sequence[Any], offset: float = 0.0) -> Any:
    total: Any = float(offset)
    for a, c in zip(row, coords):
        if a != 0.0:
            total = total + float(a) * c
    return total


class Quadratic(ConvexFamily):
    """u = x^T Q x / 2 + b . x + c, so that D^2u = Q."""

    tag = "quadratic"

    def __init__(self, Q, b=None, c: float = 0.0):
        Q = np.atleast_2d(np.asarray(Q, dtype=float))
        if Q.shape[0] != Q.shape[1]:
            raise ValueError(f"Q must be square, got shape {Q.shape}")
        if not np.allclose(Q, Q.T, atol=1e-12):
            raise ValueError("Q must be symmetric")
        if np.min(np.linalg.eigvalsh(Q)) < -1e-12 * max(1.0, np.max(np.abs(Q))):
            raise ParameterRangeError("Q must be positive semidefinite for a convex quadratic")
        super().__init__(Q.shape[0])
        self.Q = Q
        self.b = np.zeros(self.dim) if b is None else np.asarray(b, dtype=float)
        if self.b.shape != (self.dim,):
            raise ValueError(f"b must have length {self.dim}")
        self.c = float(c)

    def expression(self, coords):
        total: Any = self.c + _dot(self.b, coords)
        for i in range(self.dim):
            if self.Q[i, i] != 0.0:
                total = total + 0.5 * float(self.Q[i, i]) * coords[i] * coords[i]
            for j in range(i + 1, self.dim):
                if self.Q[i, j] != 0.0:
                    total = total + float(self.Q[i, j]) * coords[i] * coords[j]
        return total

    def closed_form_det(self, x):
        pts, single = self._as_points(x)
        det = np.full(pts.shape[0], float(np.linalg.det(self.Q)))
        return float(det[0]) if single else det

    def parameters(self):
        return {"Q": self.Q.tolist(), "b": self.b.tolist(), "c": self.c}


class WarrenSeparable(ConvexFamily):
    """u = |y|^2 eta(t) + phi(t)."""

    tag = "warren"

    def __init__(self, eta: ScalarCurve, phi: ScalarCurve, n: int):
        super().__init__(n + 1)
        self.n = int(n)
        self.eta = eta
        self.phi = phi

    def expression(self, coords):
        y, t = coords[:-1], coords[-1]
        return square_norm(y) * self.eta(t) + self.phi(t)

    def admissible(self, points):
        t = points[:, -1]
        ok = _curve_ok(self.eta, t) & _curve_ok(self.phi, t)
        eta = np.full(t.shape, -1.0)
        eta[ok] = self.eta.value(t[ok])
        return ok & (eta > 0)

    def closed_form_det(self, x):
        pts, single = self._as_points(x)
        self.check(pts)
        y, t = pts[:, :-1], pts[:, -1]
        r2 = np.sum(y * y, axis=1)
        e0, e1, e2, _, _ = self.eta.derivatives(t)
        phi2 = self.phi.derivatives(t)[2]
        det = (2 * e0) ** self.n * (r2 * (e2 - 2 * e1 ** 2 / e0) + phi2)
        return float(det[0]) if single else det

    def sample_box(self):
        lo, hi = -np.ones(self.dim), np.ones(self.dim)
        lo[-1], hi[-1] = 0.2, 2.0
        return lo, hi

    def parameters(self):
        return {"n": self.n, "eta": self.eta.to_dict(), "phi": self.phi.to_dict()}


class TWSeparable(ConvexFamily):
    """u = phi(|y|) eta(t), away from the axis y = 0."""

    tag = "trudinger-wang"

    def __init__(self, phi: ScalarCurve, eta: ScalarCurve, n: int):
        super().__init__(n + 1)
        self.n = int(n)
        self.phi = phi
        self.eta = eta

    def expression(self, coords):
        y, t = coords[:-1], coords[-1]
        return self.phi(sqrt(square_norm(y))) * self.eta(t)

    def admissible(self, points):
        r = np.linalg.norm(points[:, :-1], axis=1)
        return (r > margin(r)) & _curve_ok(self.phi, r) & _curve_ok(self.eta, points[:, -1])

    def closed_form_det(self, x):
        pts, single = self._as_points(x)
        self.check(pts)
        r = np.linalg.norm(pts[:, :-1], axis=1)
        f0, f1, f2, _, _ = self.phi.derivatives(r)
        e0, e1, e2, _, _ = self.eta.derivatives(pts[:, -1])
        det = (e0 * f1 / r) ** (self.n - 1) * (e0 * f2 * f0 * e2 - f1 ** 2 * e1 ** 2)
        return float(det[0]) if single else det

    def sample_box(self):
        lo, hi = -np.ones(self.dim), np.ones(self.dim)
        lo[-1], hi[-1] = 0.2, 2.0
        return lo, hi

    def parameters(self):
        return {"n": self.n, "phi": self.phi.to_dict(), "eta": self.eta.to_dict()}


class ExpPower(ConvexFamily):
    """u = exp(|y|^alpha + t)."""

    tag = "exp-power"

    def __init__(self, alpha: float, n: int):
        if alpha <= 1:
            raise ParameterRangeError(f"alpha must exceed 1, got {alpha}")
        super().__init__(n + 1)
        self.alpha = float(alpha)
        self.n = int(n)
        half = self.alpha / 2
        self._smooth = half.is_integer()

    def expression(self, coords):
        y, t = coords[:-1], coords[-1]
        return exp(power(square_norm(y), self.alpha / 2) + t)

    def admissible(self, points):
        if self._smooth:
            return np.ones(points.shape[0], dtype=bool)
        r = np.linalg.norm(points[:, :-1], axis=1)
        return r > margin(r)

    def closed_form_det(self, x):
        pts, single = self._as_points(x)
        self.check(pts)
        a, n = self.alpha, self.n
        r = np.linalg.norm(pts[:, :-1], axis=1)
        det = np.exp((n + 1) * (r ** a + pts[:, -1])) * a ** n * (a - 1) * r ** (n * (a - 2))
        return float(det[0]) if single else det

    def parameters(self):
        return {"alpha": self.alpha, "n": self.n}


class HalfExp(ConvexFamily):
    """u = exp(y1^2 + t) + y'^T A y' + B . y' + C with y' = (y2, ..., yn)."""

    tag = "half-exp"

    def __init__(self, A, B=None, C: float = 0.0):
        A = np.atleast_2d(np.asarray(A, dtype=float))
        if A.shape[0] != A.shape[1] or not np.allclose(A, A.T, atol=1e-12):
            raise ValueError("A must be a symmetric square matrix")
        try:
            np.linalg.cholesky(A)
        except np.linalg.LinAlgError:
            raise ParameterRangeError("A must be positive definite per Corollary 9.1")
        self.n = A.shape[0] + 1
        super().__init__(self.n + 1)
        self.A = A
        self.B = np.zeros(self.n - 1) if B is None else np.asarray(B, dtype=float)
        if self.B.shape != (self.n - 1,):
            raise ValueError(f"B must have length {self.n - 1}")
        self.C = float(C)
        self._quadratic = Quadratic(2 * A, self.B, self.C)

    def expression(self, coords):
        y1, rest, t = coords[0], coords[1:-1], coords[-1]
        return exp(y1 * y1 + t) + self._quadratic.expression(rest)

    def closed_form_det(self, x):
        pts, single = self._as_points(x)
        det = 2 * np.exp(2 * (pts[:, 0] ** 2 + pts[:, -1])) * np.linalg.det(2 * self.A)
        return float(det[0]) if single else det

    def parameters(self):
        return {"A": self.A.tolist(), "B": self.B.tolist(), "C": self.C}


class _Product(ConvexFamily):
    def __init__(self, alpha: Sequence[float], dim: int):
        alpha = np.asarray(alpha, dtype=float)
        if alpha.ndim != 1 or alpha.size == 0:
            raise ValueError("alpha must be a nonempty vector")
        if np.any(alpha <= 0):
            raise ParameterRangeError(f"All alpha_i must be positive, got {alpha.tolist()}")
        super().__init__(dim)
        self.alpha = alpha

    def _monomial(self, coords):
        out: Any = 1.0
        for a, y in zip(self.alpha, coords):
            out = out * power(y, -float(a))
        return out

    def admissible(self, points):
        y = points[:, : self.alpha.size]
        return np.all(y > margin(y), axis=1)

    def sample_box(self):
        lo, hi = -np.ones(self.dim), np.ones(self.dim)
        lo[: self.alpha.size], hi[: self.alpha.size] = 0.2, 2.0
        return lo, hi

    def parameters(self):
        return {"alpha": self.alpha.tolist()}


class ProductHalfSpace(_Product):
    """u = prod y_i^(-alpha_i) e^t on the orthant y_i > 0 times R."""

    tag = "product-halfspace"

    def __init__(self, alpha: Sequence[float]):
        super().__init__(alpha, len(alpha) + 1)

    def expression(self, coords):
        return self._monomial(coords[:-1]) * exp(coords[-1])

    def closed_form_det(self, x):
        pts, single = self._as_points(x)
        self.check(pts)
        N = self.dim
        y = pts[:, :-1]
        det = np.prod(self.alpha * y ** (-N * self.alpha - 2), axis=1) * np.exp(N * pts[:, -1])
        return float(det[0]) if single else det


class ProductFull(_Product):
    """u = prod y_i^(-alpha_i) on the positive orthant."""

    tag = "product-full"

    def __init__(self, alpha: Sequence[float]):
        super().__init__(alpha, len(alpha))

    @property
    def beta(self) -> float:
        return 1.0 + float(np.sum(self.alpha))

    def expression(self, coords):
        return self._monomial(coords)

    def closed_form_det(self, x):
        pts, single = self._as_points(x)
        self.check(pts)
        det = self.beta * np.prod(self.alpha * pts ** (-self.dim * self.alpha - 2), axis=1)
        return float(det[0]) if single else det


class PowerRadial(ConvexFamily):
    """u = |x|^beta + constant."""

    tag = "power-radial"

    def __init__(self, beta: float, dim: int, constant: float = -1.0):
        if beta <= 1:
            raise ParameterRangeError(f"beta must exceed 1, got {beta}")
        super().__init__(dim)
        self.beta = float(beta)
        self.constant = float(constant)
        self.radial_center = np.zeros(dim)
        self._smooth = (self.beta / 2).is_integer()

    def expression(self, coords):
        return power(square_norm(coords), self.beta / 2) + self.constant

    def admissible(self, points):
        if self._smooth:
            return np.ones(points.shape[0], dtype=bool)
        r = np.linalg.norm(points, axis=1)
        return r > margin(r)

    def radial_profile(self):
        """(c, p) with det D^2u = c * r^p."""
        N, b = self.dim, self.beta
        return b ** N * (b - 1), N * (b - 2)

    def closed_form_det(self, x):
        pts, single = self._as_points(x)
        c, p = self.radial_profile()
        det = c * np.linalg.norm(pts, axis=1) ** p
        return float(det[0]) if single else det

    def parameters(self):
        return {"beta": self.beta, "constant": self.constant}


class Cone(ConvexFamily):
    """u = slope * |x - apex| + constant; its whole mass sits at the apex."""

    tag = "cone"

    def __init__(self, dim: int, slope: float = 1.0, constant: float = -1.0, apex=None):
        if slope <= 0:
            raise ParameterRangeError(f"Cone slope must be positive, got {slope}")
        super().__init__(dim)
        self.slope = float(slope)
        self.constant = float(constant)
        self.apex = np.zeros(dim) if apex is None else np.asarray(apex, dtype=float)

    def expression(self, coords):
        shifted = [c - float(a) for c, a in zip(coords, self.apex)]
        return self.slope * sqrt(square_norm(shifted)) + self.constant

    def admissible(self, points):
        r = np.linalg.norm(points - self.apex, axis=1)
        return r > margin(r)

    def closed_form_det(self, x):
        pts, single = self._as_points(x)
        return 0.0 if single else np.zeros(pts.shape[0])

    def atoms(self):
        # the subgradient image of the apex is the ball of radius slope
        return [(self.apex.copy(), unit_ball_volume(self.dim) * self.slope ** self.dim)]

    def parameters(self):
        return {"slope": self.slope, "constant": self.constant, "apex": self.apex.tolist()}


class SlabSeparable(ConvexFamily):
    """u = zeta(x1) |x'|^2 - eta(x1)."""

    tag = "slab"

    def __init__(self, zeta: ScalarCurve, eta: ScalarCurve, dim: int):
        if dim < 2:
            raise ValueError("Slab family needs dimension at least 2")
        super().__init__(dim)
        self.zeta = zeta
        self.eta = eta

    def expression(self, coords):
        x1, rest = coords[0], coords[1:]
        return self.zeta(x1) * square_norm(rest) - self.eta(x1)

    def admissible(self, points):
        x1 = points[:, 0]
        return (x1 > margin(x1)) & _curve_ok(self.zeta, x1) & _curve_ok(self.eta, x1)

    def closed_form_det(self, x):
        pts, single = self._as_points(x)
        self.check(pts)
        n = self.dim - 1
        r2 = np.sum(pts[:, 1:] ** 2, axis=1)
        z0, z1, z2, _, _ = self.zeta.derivatives(pts[:, 0])
        eta2 = self.eta.derivatives(pts[:, 0])[2]
        det = (2 * z0) ** n * (r2 * (z2 - 2 * z1 ** 2 / z0) - eta2)
        return float(det[0]) if single else det

    def sample_box(self):
        lo, hi = -np.ones(self.dim), np.ones(self.dim)
        lo[0] = max(self.zeta.domain[0], self.eta.domain[0], 0.0)
        hi[0] = min(self.zeta.domain[1], self.eta.domain[1], lo[0] + 2.0)
        return lo, hi

    def parameters(self):
        return {"zeta": self.zeta.to_dict(), "eta": self.eta.to_dict()}


class CoordinatePower(ConvexFamily):
    """u = coef * x_axis^p for an even integer p."""

    tag = "coordinate-power"

    def __init__(self, dim: int, axis: int, exponent: int, coef: float = 1.0):
        if not 0 <= axis < dim:
            raise ValueError(f"Axis {axis} out of range for dimension {dim}")
        if exponent < 2 or exponent % 2:
            raise ParameterRangeError(f"Exponent must be an even integer >= 2, got {exponent}")
        if coef < 0:
            raise ParameterRangeError("Coefficient must be nonnegative for convexity")
        super().__init__(dim)
        self.axis = int(axis)
        self.exponent = int(exponent)
        self.coef = float(coef)

    def expression(self, coords):
        return self.coef * coords[self.axis] ** self.exponent

    def parameters(self):
        return {"axis": self.axis, "exponent": self.exponent, "coef": self.coef}


class SumFamily(ConvexFamily):
    """Pointwise sum of families on the intersection of their domains."""

    tag = "sum"

    def __init__(self, terms: Sequence[ConvexFamily]):
        if not terms:
            raise ValueError("SumFamily needs at least one term")
        dims = {term.dim for term in terms}
        if len(dims) != 1:
            raise ValueError(f"Summed families must share one dimension, got {sorted(dims)}")
        super().__init__(dims.pop())
        self.terms = list(terms)

    def expression(self, coords):
        total: Any = 0.0
        for term in self.terms:
            total = total + term.expression(coords)
        return total

    def admissible(self, points):
        mask = np.ones(points.shape[0], dtype=bool)
        for term in self.terms:
            mask &= term.admissible(points)
        return mask

    def atoms(self):
        # exact while at most one term is singular at each atom
        return [atom for term in self.terms for atom in term.atoms()]

    def parameters(self):
        return {"terms": [term.to_dict() for term in self.terms]}


class AffineImage(ConvexFamily):
    """u(x) = base(A x + shift) + linear . x + constant."""

    tag = "affine-image"

    def __init__(
        self,
        base: ConvexFamily,
        matrix,
        shift=None,
        linear=None,
        constant: float = 0.0,
    ):
        A = np.asarray(matrix, dtype=float)
        if A.shape != (base.dim, base.dim):
            raise ValueError(f"Matrix must have shape {(base.dim, base.dim)}, got {A.shape}")
        det = float(np.linalg.det(A))
        if abs(det) < 1e-14:
            raise ValueError("Affine map must be invertible")
        super().__init__(base.dim)
        self.base = base
        self.matrix = A
        self.det_matrix = det
        self.shift = np.zeros(self.dim) if shift is None else np.asarray(shift, dtype=float)
        self.linear = np.zeros(self.dim) if linear is None else np.asarray(linear, dtype=float)
        self.constant = float(constant)

    def _inner(self, points: np.ndarray) -> np.ndarray:
        return points @ self.matrix.T + self.shift

    def expression(self, coords):
        inner = [_dot(row, coords, s) for row, s in zip(self.matrix, self.shift)]
        return self.base.expression(inner) + _dot(self.linear, coords, self.constant)

    def admissible(self, points):
        return self.base.admissible(self._inner(points))

    def closed_form_det(self, x):
        pts, single = self._as_points(x)
        det = self.det_matrix ** 2 * np.atleast_1d(self.base.closed_form_det(self._inner(pts)))
        return float(det[0]) if single else det

    def atoms(self):
        out = []
        for point, mass in self.base.atoms():
            pre = np.linalg.solve(self.matrix, point - self.shift)
            out.append((pre, abs(self.det_matrix) * mass))
        return out

    def singular_points(self):
        return [
            np.linalg.solve(self.matrix, point - self.shift)
            for point in self.base.singular_points()
        ]

    def tangent(self, x0):
        x0 = np.asarray(x0, dtype=float)
        if self.contains(x0):
            return super().tangent(x0)
        value, grad = self.base.tangent(self._inner(x0[None, :])[0])
        return (
            value + float(self.linear @ x0) + self.constant,
            self.matrix.T @ grad + self.linear,
        )

    def sample_points(self, rng, count):
        inner = self.base.sample_points(rng, count)
        return np.linalg.solve(self.matrix, (inner - self.shift).T).T

    def parameters(self):
        return {
            "base": self.base.to_dict(),
            "matrix": self.matrix.tolist(),
            "shift": self.shift.tolist(),
            "linear": self.linear.tolist(),
            "constant": self.constant,
        }
