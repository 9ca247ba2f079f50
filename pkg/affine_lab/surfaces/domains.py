"""
Bounded convex domains with quadrature rules.

Every domain integrates through ``quadrature(level)``: nodes and weights that
double in resolution per level, so mass estimates can be refined and compared.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, cKDTree
from scipy.spatial.distance import pdist
from scipy.special import roots_jacobi, roots_legendre

from affine_lab.errors import DegenerateSetError, DomainViolation
from affine_lab.models import DomainGeometry
from .curves import ScalarCurve

logger = logging.getLogger(__name__)

Rule = Tuple[np.ndarray, np.ndarray]


def default_resolution(dim: int) -> int:
    return 256 if dim == 2 else 64 if dim == 3 else 32


def sphere_rule(dim: int, resolution: Optional[int] = None) -> Rule:
    """
    Quadrature rule on the unit sphere S^(dim-1).

    Circles use equally spaced angles; higher spheres split off one
    coordinate z with Gauss-Jacobi nodes for the weight (1 - z^2)^((dim-3)/2)
    and recurse on S^(dim-2).

    Args:
        dim: Ambient dimension
        resolution: Angles on the circle level (defaults to 256 in 2-D, 64 in 3-D)

    Returns:
        Tuple (directions of shape (M, dim), weights of shape (M,)) whose
        weights sum to the area of the sphere
    """
    if resolution is None:
        resolution = default_resolution(dim)
    if dim == 1:
        return np.array([[1.0], [-1.0]]), np.ones(2)
    if dim == 2:
        angles = (np.arange(resolution) + 0.5) * (2 * math.pi / resolution)
        return (
            np.column_stack([np.cos(angles), np.sin(angles)]),
            np.full(resolution, 2 * math.pi / resolution),
        )
    a = (dim - 3) / 2
    z, wz = roots_jacobi(max(resolution // 2, 2), a, a)
    sub_dirs, sub_w = sphere_rule(dim - 1, resolution if dim == 3 else max(resolution // 2, 4))
    s = np.sqrt(1.0 - z ** 2)
    m = sub_dirs.shape[0]
    dirs = np.concatenate(
        [np.repeat(z, m)[:, None], (s[:, None, None] * sub_dirs[None, :, :]).reshape(-1, dim - 1)],
        axis=1,
    )
    return dirs, (wz[:, None] * sub_w[None, :]).ravel()


def sphere_area(dim: int) -> float:
    """|S^(dim-1)|."""
    return 2 * math.pi ** (dim / 2) / math.gamma(dim / 2)


def gauss_interval(n: int, lo: float, hi: float, grading: float = 1.0) -> Rule:
    """Gauss-Legendre nodes on [lo, hi], optionally graded toward lo as lo + (hi-lo) tau^grading."""
    tau, w = roots_legendre(n)
    tau = (tau + 1) / 2
    w = w / 2
    nodes = lo + (hi - lo) * tau ** grading
    return nodes, w * (hi - lo) * grading * tau ** (grading - 1)


def _dilation_center(x0, sigma: float, dim: int) -> np.ndarray:
    if not 0 < sigma <= 1:
        raise ValueError(f"Dilation factor must lie in (0, 1], got {sigma}")
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != (dim,):
        raise ValueError(f"Dilation center must have shape ({dim},), got {x0.shape}")
    return x0


class Domain(ABC):
    """A bounded open convex set."""

    tag: str = "domain"

    def __init__(self, dim: int, level: int = 0):
        """
        Initialize the domain.

        Args:
            dim: Ambient dimension
            level: Default quadrature refinement level
        """
        if dim < 1:
            raise ValueError(f"Dimension must be positive, got {dim}")
        if level < 0:
            raise ValueError(f"Quadrature level must be nonnegative, got {level}")
        self.dim = int(dim)
        self.level = int(level)
        self._tree: Optional[cKDTree] = None

    @abstractmethod
    def contains(self, points) -> np.ndarray:
        """Mask of points in the open set."""
        pass

    @abstractmethod
    def quadrature(self, level: Optional[int] = None) -> Rule:
        """
        Quadrature nodes and weights.

        Args:
            level: Refinement level (defaults to the domain's own level)

        Returns:
            Tuple (points of shape (M, dim), weights of shape (M,))
        """
        pass

    @abstractmethod
    def boundary_points(self) -> np.ndarray:
        """A dense sample of the boundary, shape (M, dim)."""
        pass

    @abstractmethod
    def parameters(self) -> Dict[str, Any]:
        pass

    def _level(self, level: Optional[int]) -> int:
        return self.level if level is None else int(level)

    def diameter(self) -> float:
        return float(np.max(pdist(self.boundary_points())))

    def volume(self, level: Optional[int] = None) -> float:
        return float(np.sum(self.quadrature(level)[1]))

    def distance_to_boundary(self, points) -> np.ndarray:
        """Distance of interior points to the sampled boundary."""
        if self._tree is None:
            self._tree = cKDTree(self.boundary_points())
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return self._tree.query(pts)[0]

    def inradius(self) -> float:
        points, _ = self.quadrature(0)
        return float(np.max(self.distance_to_boundary(points)))

    def bounding_box(self) -> Tuple[np.ndarray, np.ndarray]:
        boundary = self.boundary_points()
        return boundary.min(axis=0), boundary.max(axis=0)

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """Uniform random points by rejection from the bounding box."""
        lo, hi = self.bounding_box()
        found, total = [], 0
        for _ in range(200):
            batch = rng.uniform(lo, hi, size=(2 * count, self.dim))
            batch = batch[self.contains(batch)]
            found.append(batch)
            total += batch.shape[0]
            if total >= count:
                return np.concatenate(found)[:count]
        raise DegenerateSetError(f"Could not sample {count} points inside {self.tag}")

    def dilate(self, x0: Sequence[float], sigma: float) -> "Domain":
        """
        The homothetic copy x0 + sigma (self - x0).

        Raises:
            NotImplementedError: If the domain has no closed-form dilation
        """
        raise NotImplementedError(f"{self.tag} domains do not support dilation")

    def geometry(self) -> DomainGeometry:
        return domain_geometry(self)

    def to_dict(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"domain": self.tag, "dim": self.dim, "level": self.level}
        doc.update(self.parameters())
        return doc


def domain_geometry(domain: Domain) -> DomainGeometry:
    """
    Diameter, inscribed radius and volume of a bounded domain.

    Raises:
        ValueError: If the domain is unbounded or flat
    """
    geometry = DomainGeometry(
        diameter=domain.diameter(), inradius=domain.inradius(), volume=domain.volume()
    )
    logger.debug(f"{domain.tag} geometry: {geometry}")
    return geometry


class Ball(Domain):
    """Open ball B(center, radius)."""

    tag = "ball"

    def __init__(
        self, center: Sequence[float], radius: float, level: int = 0, grading: float = 1.0
    ):
        center = np.asarray(center, dtype=float)
        super().__init__(center.size, level)
        if not radius > 0 or not math.isfinite(radius):
            raise ValueError(f"Ball radius must be positive and finite, got {radius}")
        if grading < 1:
            raise ValueError(f"Radial grading must be at least 1, got {grading}")
        self.center = center
        self.radius = float(radius)
        # radial nodes cluster at the center as r = radius * tau^grading
        self.grading = float(grading)

    def contains(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.linalg.norm(pts - self.center, axis=1) < self.radius

    def polar_rule(self, level: Optional[int] = None) -> Tuple[Rule, Rule]:
        """Radial and angular rules whose product is the ball quadrature."""
        level = self._level(level)
        radial = gauss_interval(16 * 2 ** level, 0.0, self.radius, self.grading)
        angular = sphere_rule(self.dim, max(default_resolution(self.dim) // 4, 8) * 2 ** level)
        return radial, angular

    def quadrature(self, level=None):
        (r, wr), (dirs, wd) = self.polar_rule(level)
        points = self.center + (r[:, None, None] * dirs[None, :, :]).reshape(-1, self.dim)
        weights = ((wr * r ** (self.dim - 1))[:, None] * wd[None, :]).ravel()
        return points, weights

    def boundary_points(self):
        return self.center + self.radius * sphere_rule(self.dim)[0]

    def diameter(self):
        return 2 * self.radius

    def volume(self, level=None):
        return sphere_area(self.dim) * self.radius ** self.dim / self.dim

    def inradius(self):
        return self.radius

    def distance_to_boundary(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return self.radius - np.linalg.norm(pts - self.center, axis=1)

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def dilate(self, x0, sigma):
        x0 = _dilation_center(x0, sigma, self.dim)
        return Ball(x0 + sigma * (self.center - x0), sigma * self.radius, self.level, self.grading)

    def parameters(self):
        return {"center": self.center.tolist(), "radius": self.radius, "grading": self.grading}


class Box(Domain):
    """Open box prod (lower_i, upper_i)."""

    tag = "box"

    def __init__(self, lower: Sequence[float], upper: Sequence[float], level: int = 0):
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ValueError("Box bounds must be vectors of equal length")
        if not np.all(np.isfinite(lower) & np.isfinite(upper)):
            raise ValueError("Box bounds must be finite")
        if np.any(upper <= lower):
            raise ValueError("Box upper bounds must exceed lower bounds")
        super().__init__(lower.size, level)
        self.lower = lower
        self.upper = upper

    def contains(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.all((pts > self.lower) & (pts < self.upper), axis=1)

    def quadrature(self, level=None):
        n = 8 * 2 ** self._level(level)
        rules = [gauss_interval(n, lo, hi) for lo, hi in zip(self.lower, self.upper)]
        grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
        wgrids = np.meshgrid(*[r[1] for r in rules], indexing="ij")
        points = np.column_stack([g.ravel() for g in grids])
        weights = np.prod(np.column_stack([w.ravel() for w in wgrids]), axis=1)
        return points, weights

    def boundary_points(self):
        n = 33
        axes = [np.linspace(lo, hi, n) for lo, hi in zip(self.lower, self.upper)]
        grid = np.column_stack([g.ravel() for g in np.meshgrid(*axes, indexing="ij")])
        on_face = np.any(
            np.isclose(grid, self.lower) | np.isclose(grid, self.upper), axis=1
        )
        return grid[on_face]

    def diameter(self):
        return float(np.linalg.norm(self.upper - self.lower))

    def volume(self, level=None):
        return float(np.prod(self.upper - self.lower))

    def inradius(self):
        return float(np.min(self.upper - self.lower) / 2)

    def distance_to_boundary(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.min(np.minimum(pts - self.lower, self.upper - pts), axis=1)

    def bounding_box(self):
        return self.lower.copy(), self.upper.copy()

    def dilate(self, x0, sigma):
        x0 = _dilation_center(x0, sigma, self.dim)
        return Box(x0 + sigma * (self.lower - x0), x0 + sigma * (self.upper - x0), self.level)

    def parameters(self):
        return {"lower": self.lower.tolist(), "upper": self.upper.tolist()}


class OrthantBox(Box):
    """A box inside the closed positive orthant."""

    tag = "orthant-box"

    def __init__(self, lower, upper, level: int = 0):
        super().__init__(lower, upper, level)
        if np.any(self.lower < 0):
            raise DomainViolation("Orthant box must lie in the positive orthant")


class Ellipsoid(Domain):
    """{x : |M (x - center)| < 1}."""

    tag = "ellipsoid"

    def __init__(self, center: Sequence[float], matrix, level: int = 0):
        center = np.asarray(center, dtype=float)
        M = np.asarray(matrix, dtype=float)
        if M.shape != (center.size, center.size):
            raise ValueError(f"Matrix must have shape {(center.size, center.size)}")
        super().__init__(center.size, level)
        self.center = center
        self.matrix = M
        self.singular_values = np.linalg.svd(M, compute_uv=False)
        if np.min(self.singular_values) <= 0:
            raise DegenerateSetError("Ellipsoid matrix must be invertible")
        self._inverse = np.linalg.inv(M)
        self._ball = Ball(np.zeros(center.size), 1.0, level)

    def contains(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.linalg.norm((pts - self.center) @ self.matrix.T, axis=1) < 1.0

    def quadrature(self, level=None):
        z, w = self._ball.quadrature(self._level(level))
        jac = abs(np.linalg.det(self._inverse))
        return self.center + z @ self._inverse.T, w * jac

    def boundary_points(self):
        return self.center + sphere_rule(self.dim)[0] @ self._inverse.T

    def diameter(self):
        return float(2 / np.min(self.singular_values))

    def volume(self, level=None):
        return self._ball.volume() * abs(float(np.linalg.det(self._inverse)))

    def inradius(self):
        return float(1 / np.max(self.singular_values))

    def dilate(self, x0, sigma):
        x0 = _dilation_center(x0, sigma, self.dim)
        return Ellipsoid(x0 + sigma * (self.center - x0), self.matrix / sigma, self.level)

    def parameters(self):
        return {"center": self.center.tolist(), "matrix": self.matrix.tolist()}


class StarPolytope(Domain):
    """
    Polytope spanned by boundary points x0 + radius_k * direction_k.

    This is the sampled form of a sub-level set: the rays come from a sphere
    rule, so volumes and integrals over the star-shaped body are quadratures
    over directions times radial Gauss nodes.
    """

    tag = "star-polytope"

    def __init__(
        self,
        center: Sequence[float],
        directions: np.ndarray,
        radii: np.ndarray,
        weights: np.ndarray,
        level: int = 0,
    ):
        center = np.asarray(center, dtype=float)
        super().__init__(center.size, level)
        self.center = center
        self.directions = np.asarray(directions, dtype=float)
        self.radii = np.asarray(radii, dtype=float)
        self.weights = np.asarray(weights, dtype=float)
        if np.any(self.radii <= 0):
            raise DegenerateSetError("Every ray must leave the center with positive length")
        try:
            self._hull = ConvexHull(self.boundary_points())
        except Exception as e:
            raise DegenerateSetError(f"Sampled boundary spans no body: {e}") from e

    def boundary_points(self):
        return self.center + self.radii[:, None] * self.directions

    def contains(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        eq = self._hull.equations
        return np.all(pts @ eq[:, :-1].T + eq[:, -1] < 0, axis=1)

    def quadrature(self, level=None):
        tau, wt = gauss_interval(8 * 2 ** self._level(level), 0.0, 1.0)
        rho = self.radii[:, None] * tau[None, :]
        points = self.center + (rho[:, :, None] * self.directions[:, None, :]).reshape(-1, self.dim)
        weights = (
            self.weights[:, None] * self.radii[:, None] ** self.dim
            * (wt * tau ** (self.dim - 1))[None, :]
        ).ravel()
        return points, weights

    def volume(self, level=None):
        return float(np.sum(self.weights * self.radii ** self.dim) / self.dim)

    def distance_to_boundary(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        eq = self._hull.equations
        return np.min(-(pts @ eq[:, :-1].T + eq[:, -1]), axis=1)

    def inradius(self):
        # Chebyshev center: maximize r subject to a_i . x + r <= -b_i
        eq = self._hull.equations
        cost = np.zeros(self.dim + 1)
        cost[-1] = -1.0
        A = np.column_stack([eq[:, :-1], np.ones(eq.shape[0])])
        res = linprog(cost, A_ub=A, b_ub=-eq[:, -1], bounds=[(None, None)] * self.dim + [(0, None)])
        if not res.success:
            raise DegenerateSetError(f"Inscribed ball search failed: {res.message}")
        return float(res.x[-1])

    def dilate(self, x0, sigma):
        x0 = _dilation_center(x0, sigma, self.dim)
        return StarPolytope(
            x0 + sigma * (self.center - x0),
            self.directions,
            sigma * self.radii,
            self.weights,
            self.level,
        )

    def hull_vertices(self) -> np.ndarray:
        return self._hull.points[self._hull.vertices]

    def parameters(self):
        return {
            "center": self.center.tolist(),
            "directions": self.directions.tolist(),
            "radii": self.radii.tolist(),
            "weights": self.weights.tolist(),
        }


class SlabDomain(Domain):
    """
    {0 < x1 < width, zeta(x1) |x'|^2 < eta(x1)}.

    The quadrature grades x1 toward 0 and integrates |x'| radially along a
    single direction, so it is exact only for integrands that depend on x'
    through |x'|, as every function of a slab family does.
    """

    tag = "slab"

    def __init__(
        self,
        zeta: ScalarCurve,
        eta: ScalarCurve,
        width: float,
        dim: int,
        breakpoint: float,
        level: int = 0,
    ):
        super().__init__(dim, level)
        if not 0 < breakpoint < width:
            raise ValueError(f"Breakpoint {breakpoint} must lie in (0, {width})")
        self.zeta = zeta
        self.eta = eta
        self.width = float(width)
        self.breakpoint = float(breakpoint)

    def profile(self, x1) -> np.ndarray:
        """Radius sqrt(eta / zeta) of the cross-section at x1 (zero where eta <= 0)."""
        x1 = np.asarray(x1, dtype=float)
        inside = (x1 > 0) & (x1 < self.width)
        out = np.zeros_like(x1)
        eta = self.eta.value(x1[inside])
        zeta = self.zeta.value(x1[inside])
        out[inside] = np.sqrt(np.maximum(eta, 0.0) / zeta)
        return out

    def contains(self, points):
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.linalg.norm(pts[:, 1:], axis=1) < self.profile(pts[:, 0])

    def quadrature(self, level=None):
        level = self._level(level)
        n = 32 * 2 ** level
        near = gauss_interval(n, 0.0, self.breakpoint, grading=3.0)
        far = gauss_interval(n, self.breakpoint, self.width)
        x1 = np.concatenate([near[0], far[0]])
        w1 = np.concatenate([near[1], far[1]])
        rho = self.profile(x1)
        tau, wt = gauss_interval(n, 0.0, 1.0)
        k = self.dim - 1
        s = rho[:, None] * tau[None, :]
        points = np.zeros((x1.size * tau.size, self.dim))
        points[:, 0] = np.repeat(x1, tau.size)
        points[:, 1] = s.ravel()
        weights = (
            w1[:, None] * sphere_area(k) * rho[:, None] ** k * (wt * tau ** (k - 1))[None, :]
        ).ravel()
        return points, weights

    def boundary_points(self):
        x1 = np.linspace(0.0, self.width, 257)[1:-1]
        rho = self.profile(x1)
        dirs = sphere_rule(self.dim - 1, 16)[0] if self.dim > 2 else np.array([[1.0], [-1.0]])
        # the cross-sections shrink to points at both ends since lambda > gamma and eta(width) = 0
        return np.concatenate(
            [
                np.repeat(x1, dirs.shape[0])[:, None],
                (rho[:, None, None] * dirs[None]).reshape(-1, self.dim - 1),
            ],
            axis=1,
        )

    def bounding_box(self):
        x1 = np.linspace(0.0, self.width, 1025)[1:-1]
        top = float(np.max(self.profile(x1)))
        lo = np.full(self.dim, -top)
        hi = np.full(self.dim, top)
        lo[0], hi[0] = 0.0, self.width
        return lo, hi

    def parameters(self):
        return {
            "zeta": self.zeta.to_dict(),
            "eta": self.eta.to_dict(),
            "width": self.width,
            "breakpoint": self.breakpoint,
        }
