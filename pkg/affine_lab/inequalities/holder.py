"""
Sampled Hoelder seminorms of a family and of its gradient.

The supremum of |f(x) - f(y)| / |x - y|^alpha is taken over all pairs of a
stratified point set: a uniform sample, rays from an interior point to the
boundary (colinear pairs, where the supremum of a convex function usually
sits), and geometric shells shrinking toward a focus point where the
function is singular.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist

from affine_lab.errors import DegenerateSetError
from affine_lab.models import HolderEstimate, TrendTable
from affine_lab.parallel import chunks, ordered_map
from affine_lab.surfaces import ConvexFamily, Domain, sphere_rule

logger = logging.getLogger(__name__)

DEFAULT_COUNT = 512
DEFAULT_STRATA = 48
DEFAULT_RAYS = 64
SHELL_DEPTH = 4


def reference_point(domain: Domain) -> np.ndarray:
    """An interior point of the domain: its center when it has one."""
    center = getattr(domain, "center", None)
    if center is not None and domain.contains(center)[0]:
        return np.asarray(center, dtype=float)
    lo, hi = domain.bounding_box()
    mid = 0.5 * (lo + hi)
    if domain.contains(mid)[0]:
        return mid
    return domain.quadrature(0)[0][0]


def _shells(domain: Domain, focus: np.ndarray, depth: int) -> np.ndarray:
    dirs = sphere_rule(domain.dim, 16)[0]
    axes = np.vstack([np.eye(domain.dim), -np.eye(domain.dim)])
    dirs = np.vstack([dirs, axes])
    lo, hi = domain.bounding_box()
    size = float(np.max(hi - lo))
    radii = size * 0.5 ** np.arange(1, depth + 1)
    pts = focus + (radii[:, None, None] * dirs[None, :, :]).reshape(-1, domain.dim)
    return pts[domain.contains(pts)]


def holder_points(
    u: ConvexFamily,
    domain: Domain,
    rng: np.random.Generator,
    count: int = DEFAULT_COUNT,
    strata: int = DEFAULT_STRATA,
    rays: int = DEFAULT_RAYS,
    focus: Optional[Sequence[float]] = None,
    depth: int = 0,
) -> np.ndarray:
    """
    Stratified sample of the closed domain, restricted to the family's domain.

    Args:
        u: Family to evaluate
        domain: Domain to sample
        rng: Seeded generator
        count: Uniform interior points
        strata: Points per ray from the reference point to the boundary
        rays: Number of rays
        focus: Point toward which geometric shells shrink
        depth: Number of shells

    Returns:
        Admissible points, shape (M, N)
    """
    parts = [domain.sample(rng, count)]
    boundary = domain.boundary_points()
    pick = np.unique(np.linspace(0, boundary.shape[0] - 1, rays).astype(int))
    center = reference_point(domain)
    levels = np.arange(1, strata + 1) / strata
    spokes = boundary[pick] - center
    parts.append(center + (levels[:, None, None] * spokes[None, :, :]).reshape(-1, domain.dim))
    if focus is not None and depth > 0:
        parts.append(_shells(domain, np.asarray(focus, dtype=float), depth))
    points = np.concatenate(parts)
    return points[u.contains(points)]


def sup_quotient(
    points: np.ndarray, field: np.ndarray, alpha: float, workers: int = 1
) -> Tuple[float, int, int]:
    """
    max over pairs i < j of |field_i - field_j| / |x_i - x_j|^alpha.

    Returns:
        Tuple (value, i, j) with the first maximizing pair in index order
    """
    field = field.reshape(field.shape[0], -1)
    M = points.shape[0]
    if M < 2:
        raise DegenerateSetError("Hoelder quotient needs at least two sample points")

    def block(rows: np.ndarray):
        d = cdist(points[rows], points)
        df = np.linalg.norm(field[rows][:, None, :] - field[None, :, :], axis=2)
        valid = (np.arange(M)[None, :] > rows[:, None]) & (d > 0)
        q = np.where(valid, df / np.where(valid, d, 1.0) ** alpha, -np.inf)
        k = int(np.argmax(q))
        a, b = divmod(k, M)
        return float(q.flat[k]), int(rows[a]), b

    best = (-np.inf, 0, 0)
    for value, i, j in ordered_map(block, chunks(np.arange(M)), workers):
        if value > best[0]:
            best = (value, i, j)
    return best


def _estimate(points: np.ndarray, field: np.ndarray, alpha: float, workers: int) -> HolderEstimate:
    value, i, j = sup_quotient(points, field, alpha, workers)
    M = points.shape[0]
    return HolderEstimate(
        value=value,
        exponent=float(alpha),
        witness=(tuple(points[i].tolist()), tuple(points[j].tolist())),
        pairs=M * (M - 1) // 2,
    )


def holder_seminorm(
    u: ConvexFamily,
    domain: Domain,
    alpha: float,
    rng: Optional[np.random.Generator] = None,
    focus: Optional[Sequence[float]] = None,
    depth: int = 0,
    workers: int = 1,
    **sampling,
) -> HolderEstimate:
    """
    Sampled [u]_{C^alpha} over the closed domain.

    Args:
        u: Family
        domain: Domain
        alpha: Exponent in (0, 1]
        rng: Seeded generator (seed 0 by default)
        focus: Singular point to refine toward
        depth: Shell depth toward the focus
        workers: Worker pool size
        **sampling: count, strata, rays for holder_points

    Returns:
        HolderEstimate
    """
    if not 0 < alpha <= 1:
        raise ValueError(f"Hoelder exponent must lie in (0, 1], got {alpha}")
    rng = np.random.default_rng(0) if rng is None else rng
    points = holder_points(u, domain, rng, focus=focus, depth=depth, **sampling)
    estimate = _estimate(points, u.values(points), alpha, workers)
    logger.debug(f"[{u.tag}]_C^{alpha} ~ {estimate.value:.6g} over {estimate.pairs} pairs")
    return estimate


def gradient_holder(
    u: ConvexFamily,
    domain: Domain,
    alpha: float,
    rng: Optional[np.random.Generator] = None,
    focus: Optional[Sequence[float]] = None,
    depth: int = 0,
    workers: int = 1,
    **sampling,
) -> HolderEstimate:
    """Sampled [Du]_{C^alpha}, the C^{1,alpha} seminorm."""
    if not 0 < alpha <= 1:
        raise ValueError(f"Hoelder exponent must lie in (0, 1], got {alpha}")
    rng = np.random.default_rng(0) if rng is None else rng
    points = holder_points(u, domain, rng, focus=focus, depth=depth, **sampling)
    return _estimate(points, u.gradients(points), alpha, workers)


def _trend(estimator, label, u, domain, alpha, focus, levels, seed, workers, **sampling):
    if levels < 1:
        raise ValueError(f"Need at least one refinement level, got {levels}")
    scales, values = [], []
    lo, hi = domain.bounding_box()
    size = float(np.max(hi - lo))
    for k in range(levels):
        depth = SHELL_DEPTH * (k + 1)
        estimate = estimator(
            u, domain, alpha, np.random.default_rng(seed), focus, depth, workers, **sampling
        )
        scales.append(size * 0.5 ** depth)
        values.append(estimate.value)
    table = TrendTable(label=label, scales=scales, values=values)
    logger.info(f"{label} of {u.tag} at alpha={alpha}: {values}")
    return table


def holder_trend(
    u: ConvexFamily,
    domain: Domain,
    alpha: float,
    focus: Sequence[float],
    levels: int = 4,
    seed: int = 0,
    workers: int = 1,
    **sampling,
) -> TrendTable:
    """Hoelder seminorm as the sample refines toward a singular point."""
    return _trend(
        holder_seminorm, "holder_seminorm", u, domain, alpha, focus, levels, seed, workers,
        **sampling,
    )


def gradient_holder_trend(
    u: ConvexFamily,
    domain: Domain,
    alpha: float,
    focus: Sequence[float],
    levels: int = 4,
    seed: int = 0,
    workers: int = 1,
    **sampling,
) -> TrendTable:
    """Gradient Hoelder seminorm as the sample refines toward a singular point."""
    return _trend(
        gradient_holder, "gradient_holder", u, domain, alpha, focus, levels, seed, workers,
        **sampling,
    )
