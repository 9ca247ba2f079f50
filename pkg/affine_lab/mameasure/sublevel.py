"""
Sub-level sets S(x0, t) = {u - l_x0 < t} of a convex family and the measurements
built on them: doubling ratio, average density and the halving ratio.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.spatial.distance import pdist

from affine_lab.errors import (
    DegenerateSetError,
    FlatDirectionError,
    UnboundedSublevelError,
)
from affine_lab.models import TrendTable
from affine_lab.parallel import map_chunks
from affine_lab.surfaces import ConvexFamily, Domain, StarPolytope, sphere_rule
from .quadrature import integrate_det

logger = logging.getLogger(__name__)

RAY_RTOL = 1e-10
INITIAL_STEP = 1e-3
MAX_DOUBLINGS = 80
MAX_BISECTIONS = 200


@dataclass
class SubLevelSet:
    """A sampled section of u: boundary points x0 + radius_k * direction_k."""

    x0: np.ndarray
    t: float
    polytope: StarPolytope
    diameter: float
    volume: float

    def __post_init__(self):
        """Validate section."""
        if not self.t > 0:
            raise ValueError(f"Height must be positive, got {self.t}")
        if self.volume <= 0:
            raise DegenerateSetError("Sub-level set has no volume")

    @property
    def dim(self) -> int:
        return self.polytope.dim

    def boundary_points(self) -> np.ndarray:
        return self.polytope.boundary_points()

    def dilate(self, sigma: float) -> StarPolytope:
        """sigma S dilated about x0: x - x0 in sigma (S - x0)."""
        return self.polytope.dilate(self.x0, sigma)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "x0": self.x0.tolist(),
            "t": self.t,
            "directions": self.polytope.directions.tolist(),
            "radii": self.polytope.radii.tolist(),
            "diameter": self.diameter,
            "volume": self.volume,
        }


def _shoot(u: ConvexFamily, x0: np.ndarray, value: float, grad: np.ndarray, t: float):
    """Ray-shooting kernel: exit radius of {u - l < t} along each direction of a block."""

    def inside(dirs: np.ndarray, rho: np.ndarray) -> np.ndarray:
        pts = x0 + rho[:, None] * dirs
        ok = u.contains(pts)
        out = np.zeros(pts.shape[0], dtype=bool)
        if np.any(ok):
            g = u.values(pts[ok]) - value - (pts[ok] - x0) @ grad
            out[ok] = g < t
        return out

    def run(dirs: np.ndarray) -> np.ndarray:
        lo = np.zeros(dirs.shape[0])
        hi = np.full(dirs.shape[0], INITIAL_STEP * max(1.0, float(np.linalg.norm(x0))))
        pending = np.ones(dirs.shape[0], dtype=bool)
        for _ in range(MAX_DOUBLINGS):
            if not np.any(pending):
                break
            stay = inside(dirs[pending], hi[pending])
            idx = np.flatnonzero(pending)
            lo[idx[stay]] = hi[idx[stay]]
            hi[idx[stay]] *= 2
            pending[idx[~stay]] = False
        if np.any(pending):
            raise UnboundedSublevelError(
                f"Sub-level set of {u.tag} at height {t} does not close up along "
                f"{int(np.sum(pending))} rays"
            )
        for _ in range(MAX_BISECTIONS):
            if np.all(hi - lo <= RAY_RTOL * hi):
                break
            mid = 0.5 * (lo + hi)
            stay = inside(dirs, mid)
            lo = np.where(stay, mid, lo)
            hi = np.where(stay, hi, mid)
        exit_points = x0 + hi[:, None] * dirs
        if not np.all(u.contains(exit_points)):
            raise UnboundedSublevelError(
                f"Sub-level set of {u.tag} at height {t} reaches the edge of its domain"
            )
        return 0.5 * (lo + hi)

    return run


def sublevel(
    u: ConvexFamily,
    x0: Sequence[float],
    t: float,
    resolution: Optional[int] = None,
    level: int = 0,
    workers: int = 1,
) -> SubLevelSet:
    """
    Sample S(x0, t) by bisection along rays from x0.

    Args:
        u: Convex family
        x0: Base point (admissible or a singular minimum of u)
        t: Height, positive
        resolution: Sphere rule resolution (256 directions in 2-D, 2048 in 3-D by default)
        level: Radial quadrature level of the sampled polytope
        workers: Worker pool size

    Returns:
        SubLevelSet

    Raises:
        UnboundedSublevelError: If a ray leaves the domain or never exits
    """
    if not t > 0:
        raise ValueError(f"Height must be positive, got {t}")
    x0 = np.asarray(x0, dtype=float)
    value, grad = u.tangent(x0)
    dirs, weights = sphere_rule(u.dim, resolution)
    radii = np.asarray(map_chunks(_shoot(u, x0, value, grad, t), dirs, workers), dtype=float)
    polytope = StarPolytope(x0, dirs, radii, weights, level)
    boundary = polytope.boundary_points()
    section = SubLevelSet(
        x0=x0,
        t=float(t),
        polytope=polytope,
        diameter=float(np.max(pdist(boundary))),
        volume=polytope.volume(),
    )
    logger.debug(
        f"S(x0={x0.tolist()}, t={t}) of {u.tag}: diameter {section.diameter:.6g}, "
        f"volume {section.volume:.6g}"
    )
    return section


def level_set(
    u: ConvexFamily,
    x_in: Sequence[float],
    t: float,
    resolution: Optional[int] = None,
    level: int = 0,
    workers: int = 1,
) -> StarPolytope:
    """
    Sample {u < t} by rays from an interior point x_in with u(x_in) < t.

    Raises:
        ValueError: If u(x_in) >= t
        UnboundedSublevelError: If a ray leaves the domain or never exits
    """
    x_in = np.asarray(x_in, dtype=float)
    start = u.tangent(x_in)[0]
    if not start < t:
        raise ValueError(f"u({x_in.tolist()}) = {start} is not below the level {t}")
    dirs, weights = sphere_rule(u.dim, resolution)
    kernel = _shoot(u, x_in, 0.0, np.zeros(u.dim), t)
    radii = np.asarray(map_chunks(kernel, dirs, workers), dtype=float)
    return StarPolytope(x_in, dirs, radii, weights, level)


def minimum_point(u: ConvexFamily, domain: Domain) -> np.ndarray:
    """
    Minimizer of u over a domain.

    Singular points of u inside the domain come first; otherwise the best
    quadrature node seeds a Nelder-Mead search.
    """
    candidates = [p for p in u.singular_points() if domain.contains(p)[0]]
    if candidates:
        return min(candidates, key=lambda p: u.tangent(p)[0])
    points, _ = domain.quadrature(0)
    points = points[u.contains(points)]
    if points.shape[0] == 0:
        raise DegenerateSetError(f"{u.tag} is undefined on every node of {domain.tag}")
    start = points[int(np.argmin(u.values(points)))]

    def objective(x: np.ndarray) -> float:
        if not (domain.contains(x)[0] and u.contains(x)):
            return math.inf
        return float(u.values(x[None, :])[0])

    res = minimize(objective, start, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14})
    best = res.x if res.fun <= objective(start) else start
    logger.debug(f"Minimum of {u.tag} on {domain.tag} at {best.tolist()}")
    return np.asarray(best, dtype=float)


def doubling_ratio(
    u: ConvexFamily, S: SubLevelSet, sigma: float, level: Optional[int] = None, workers: int = 1
) -> float:
    """
    Mass ratio of S to sigma S, with sigma S dilated about the base point.

    Raises:
        DegenerateSetError: If sigma S carries no mass
    """
    if not 0 < sigma < 1:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma}")
    outer = integrate_det(u, S.polytope, level, workers)
    inner = integrate_det(u, S.dilate(sigma), level, workers)
    if inner <= 0:
        raise DegenerateSetError(f"sigma S carries no mass for {u.tag} (sigma={sigma})")
    return outer / inner


def average_density(
    u: ConvexFamily, S: SubLevelSet, level: Optional[int] = None, workers: int = 1
) -> float:
    """Mean of det D^2u over S."""
    return integrate_det(u, S.polytope, level, workers) / S.volume


def halving_ratio(u: ConvexFamily, x0: Sequence[float], z: Sequence[float]) -> float:
    """
    v(z/2) / v(z) for v(x) = u(x + x0) - u(x0) - Du(x0) . x.

    Raises:
        FlatDirectionError: If v(z) vanishes
    """
    x0 = np.asarray(x0, dtype=float)
    z = np.asarray(z, dtype=float)
    value, grad = u.tangent(x0)
    pts = np.vstack([x0 + z / 2, x0 + z])
    vals = u.values(pts)
    v = vals - value - (pts - x0) @ grad
    scale = max(1.0, abs(value), float(np.max(np.abs(vals))))
    if v[1] <= 1e-14 * scale:
        raise FlatDirectionError(f"v vanishes at z={z.tolist()} for {u.tag}")
    return float(v[0] / v[1])


def halving_exponent(
    u: ConvexFamily, x0: Sequence[float], z: Sequence[float], levels: int = 6
) -> TrendTable:
    """
    Empirical exponent 1 + alpha = -log2(v(z/2) / v(z)) along z, z/2, z/4, ...

    Returns:
        TrendTable of the exponent against |z|
    """
    z = np.asarray(z, dtype=float)
    scales, values = [], []
    for k in range(levels):
        zk = z / 2 ** k
        ratio = halving_ratio(u, x0, zk)
        scales.append(float(np.linalg.norm(zk)))
        values.append(-math.log2(ratio))
    return TrendTable(label="halving_exponent", scales=scales, values=values)
