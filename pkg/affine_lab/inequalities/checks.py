"""
Both sides of the sharp estimates for convex functions with bounded
Monge-Ampere mass, evaluated for a concrete family on a concrete domain.

Every check returns an InequalityReport whose right side leaves out the
universal constant, so the reported ratio is a lower bound for that constant.
The lemmas with explicit constants (R_2 and R_1 bounds) also report pass/fail.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from affine_lab.errors import BoundaryConditionError, DegenerateSetError, DomainViolation
from affine_lab.mameasure import level_set, ma_mass, minimum_point
from affine_lab.models import InequalityReport
from affine_lab.surfaces import ConvexFamily, Domain, unit_ball_volume
from .holder import holder_seminorm

logger = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-8
PASS_RTOL = 1e-9


def boundary_defect(u: ConvexFamily, domain: Domain, value: float = 0.0) -> float:
    """max |u - value| over the admissible boundary sample, relative to the size of u."""
    boundary = domain.boundary_points()
    boundary = boundary[u.contains(boundary)]
    if boundary.shape[0] == 0:
        raise DegenerateSetError(f"{u.tag} is undefined on the whole boundary of {domain.tag}")
    interior, _ = domain.quadrature(0)
    interior = interior[u.contains(interior)]
    size = float(np.max(np.abs(u.values(interior)))) if interior.size else 0.0
    scale = max(1.0, abs(value), size)
    return float(np.max(np.abs(u.values(boundary) - value))) / scale


def require_boundary_value(u: ConvexFamily, domain: Domain, value: float, where: str) -> None:
    """
    Raises:
        BoundaryConditionError: If u differs from value on the boundary
    """
    defect = boundary_defect(u, domain, value)
    if defect > BOUNDARY_TOL:
        raise BoundaryConditionError(
            f"u must equal {value:g} on the boundary per {where} "
            f"({u.tag} on {domain.tag} is off by {defect:.3e})"
        )


def _section(u: ConvexFamily, domain: Domain, x_min: np.ndarray, t: float) -> Domain:
    """Omega_t = {u < t}: the domain itself at t = 0, a sampled polytope below."""
    if t == 0:
        return domain
    if not u.tangent(x_min)[0] < t:
        raise DegenerateSetError(f"Omega_t of {u.tag} is empty at t={t}")
    return level_set(u, x_min, t)


def _closure_sample(u: ConvexFamily, section: Domain, x_min: np.ndarray) -> np.ndarray:
    """Quadrature nodes and boundary points of a section, plus its minimum point."""
    points = np.concatenate([section.quadrature(0)[0], section.boundary_points()])
    points = points[u.contains(points)]
    if u.contains(x_min):
        points = np.vstack([x_min, points])
    if points.shape[0] == 0:
        raise DegenerateSetError(f"No admissible sample points in the section of {u.tag}")
    return points


def check_c1n(
    u: ConvexFamily,
    domain: Domain,
    level: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    workers: int = 1,
) -> InequalityReport:
    """
    [u]^N_{C^{1/N}} against R^{N-1} A(u, Omega) with R = diam(Omega) / 2.

    Args:
        u: Convex family vanishing on the boundary
        domain: Domain
        level: First mass quadrature level
        rng: Seeded generator for the Hoelder sample
        workers: Worker pool size

    Returns:
        InequalityReport

    Raises:
        BoundaryConditionError: If u does not vanish on the boundary
    """
    require_boundary_value(u, domain, 0.0, "Theorem 1.3")
    N = domain.dim
    estimate = holder_seminorm(u, domain, 1.0 / N, rng=rng, workers=workers)
    mass = ma_mass(u, domain, level, workers=workers)
    R = domain.diameter() / 2
    report = InequalityReport(
        check="c1n",
        lhs=estimate.value ** N,
        rhs=R ** (N - 1) * mass.value,
        witness=list(estimate.witness),
        grid={"pairs": estimate.pairs, "mass_method": mass.method, "mass_levels": len(mass.levels)},
        family=u.tag,
    )
    logger.info(f"c1n {u.tag} on {domain.tag}: ratio {report.ratio:.6g}")
    return report


def check_gradient(
    u: ConvexFamily,
    domain: Domain,
    mode: str = "sublevel",
    s: Optional[float] = None,
    t: float = 0.0,
    x: Optional[Sequence[float]] = None,
    level: Optional[int] = None,
    workers: int = 1,
) -> InequalityReport:
    """
    Gradient bound in sub-level or interior form.

    sublevel: sup_{Omega_s} |Du| against (diam(Omega_t) / (t - s))^{N-1} A(u, Omega_t).
    interior: |Du(x)|^N against (diam(Omega) / dist(x, boundary))^{N-1} A(u, Omega).

    Raises:
        ValueError: If the mode is unknown or s < t <= 0 fails
        BoundaryConditionError: If u does not vanish on the boundary
        DegenerateSetError: If Omega_s is empty
        DomainViolation: If x is not an interior point
    """
    N = domain.dim
    if mode == "interior":
        if x is None:
            raise ValueError("Interior mode needs a point x")
        x = np.asarray(x, dtype=float)
        if not (domain.contains(x)[0] and u.contains(x)):
            raise DomainViolation(f"x={x.tolist()} is not an interior point of {domain.tag}")
        lhs = float(np.linalg.norm(u.gradient(x))) ** N
        mass = ma_mass(u, domain, level, workers=workers)
        dist = float(domain.distance_to_boundary(x)[0])
        rhs = (domain.diameter() / dist) ** (N - 1) * mass.value
        return InequalityReport(
            check="gradient-interior",
            lhs=lhs,
            rhs=rhs,
            witness=[tuple(x.tolist())],
            grid={"dist": dist, "mass_method": mass.method},
            family=u.tag,
        )
    if mode != "sublevel":
        raise ValueError(f"Unknown gradient mode: {mode}")
    if s is None or not s < t <= 0:
        raise ValueError(f"Need s < t <= 0, got s={s}, t={t}")
    require_boundary_value(u, domain, 0.0, "Theorem 1.4")
    x_min = minimum_point(u, domain)
    outer = _section(u, domain, x_min, t)
    inner = _section(u, domain, x_min, s)
    points = _closure_sample(u, inner, x_min)
    norms = np.linalg.norm(u.gradients(points), axis=1)
    k = int(np.argmax(norms))
    mass = ma_mass(u, outer, level, workers=workers)
    diameter = outer.diameter()
    report = InequalityReport(
        check="gradient",
        lhs=float(norms[k]),
        rhs=(diameter / (t - s)) ** (N - 1) * mass.value,
        witness=[tuple(points[k].tolist())],
        grid={"s": s, "t": t, "samples": int(points.shape[0]), "diameter": diameter},
        family=u.tag,
    )
    logger.info(f"gradient {u.tag} on {domain.tag} (s={s}, t={t}): ratio {report.ratio:.6g}")
    return report


def check_cone_lemma(
    u: ConvexFamily,
    domain: Domain,
    t: float,
    s: float,
    points: Optional[Sequence[Sequence[float]]] = None,
    level: Optional[int] = None,
    workers: int = 1,
) -> InequalityReport:
    """
    max over x in Omega_s of (h/d)(h/D)^{N-1} against A(u, Omega_t).

    h = t - u(x), d = dist(x, boundary of Omega_t), D = diam(Omega_t).

    Args:
        u: Convex family vanishing on the boundary
        domain: Domain
        t: Outer level, t <= 0
        s: Inner level, s < t
        points: Points of Omega_s to test (a sample of Omega_s by default)
        level: First mass quadrature level
        workers: Worker pool size
    """
    if not s < t <= 0:
        raise ValueError(f"Need s < t <= 0, got s={s}, t={t}")
    require_boundary_value(u, domain, 0.0, "Lemma 2.1")
    N = domain.dim
    x_min = minimum_point(u, domain)
    outer = _section(u, domain, x_min, t)
    if points is None:
        pts = _closure_sample(u, _section(u, domain, x_min, s), x_min)
    else:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
    ok = u.contains(pts)
    values = np.empty(pts.shape[0])
    values[ok] = u.values(pts[ok])
    for i in np.flatnonzero(~ok):
        values[i] = u.tangent(pts[i])[0]
    keep = (values <= s + BOUNDARY_TOL * max(1.0, abs(s))) & outer.contains(pts)
    if not np.any(keep):
        raise DegenerateSetError(f"No test point of {u.tag} lies in Omega_s for s={s}")
    pts, values = pts[keep], values[keep]
    h = t - values
    d = outer.distance_to_boundary(pts)
    D = outer.diameter()
    terms = (h / d) * (h / D) ** (N - 1)
    k = int(np.argmax(terms))
    mass = ma_mass(u, outer, level, workers=workers)
    report = InequalityReport(
        check="cone",
        lhs=float(terms[k]),
        rhs=mass.value,
        witness=[tuple(pts[k].tolist())],
        grid={"s": s, "t": t, "h": float(h[k]), "d": float(d[k]), "D": D},
        family=u.tag,
    )
    logger.info(f"cone lemma {u.tag} (s={s}, t={t}): ratio {report.ratio:.6g}")
    return report


def _radii(domain: Domain, x0: np.ndarray) -> Tuple[float, float]:
    """R_1 = dist(x0, boundary) and R_2 = max |b - x0|, so B_{R_1} in Omega in B_{R_2}."""
    R1 = float(domain.distance_to_boundary(x0)[0])
    R2 = float(np.max(np.linalg.norm(domain.boundary_points() - x0, axis=1)))
    return R1, R2


def check_lemma41(
    u: ConvexFamily,
    domain: Domain,
    sigma: float = 0.5,
    level: Optional[int] = None,
    workers: int = 1,
) -> InequalityReport:
    """
    (1 - sigma)^N A(u, sigma Omega) against (h / R_1)^N.

    h = -min u, the balls B_{R_1} in Omega in B_{R_2} are centered at the
    minimum point and sigma Omega is dilated about it.
    """
    if not 0 < sigma < 1:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma}")
    require_boundary_value(u, domain, 0.0, "Lemma 4.1")
    N = domain.dim
    x0 = minimum_point(u, domain)
    h = -u.tangent(x0)[0]
    R1, R2 = _radii(domain, x0)
    inner = ma_mass(u, domain.dilate(x0, sigma), level, workers=workers)
    report = InequalityReport(
        check="lemma41",
        lhs=(1 - sigma) ** N * inner.value,
        rhs=(h / R1) ** N,
        witness=[tuple(x0.tolist())],
        grid={"sigma": sigma, "R1": R1, "R2": R2, "h": h},
        family=u.tag,
    )
    logger.info(f"lemma41 {u.tag} (sigma={sigma}): ratio {report.ratio:.6g}")
    return report


def require_normalized(u: ConvexFamily, domain: Domain, where: str) -> None:
    """
    Check u = 1 on the boundary, u(0) = 0 and Du(0) = 0.

    Raises:
        BoundaryConditionError: If any part of the normalization fails
    """
    require_boundary_value(u, domain, 1.0, where)
    origin = np.zeros(domain.dim)
    if not domain.contains(origin)[0]:
        raise BoundaryConditionError(f"The origin must lie in the domain per {where}")
    value, grad = u.tangent(origin)
    if abs(value) > BOUNDARY_TOL or float(np.linalg.norm(grad)) > BOUNDARY_TOL:
        raise BoundaryConditionError(
            f"u(0) = 0 and Du(0) = 0 are required per {where}, got u(0)={value:.3e}, "
            f"|Du(0)|={float(np.linalg.norm(grad)):.3e}"
        )


def check_lemma42(
    u: ConvexFamily, domain: Domain, level: Optional[int] = None, workers: int = 1
) -> InequalityReport:
    """R_2^{-N} <= omega_N^{-1} A(u, Omega) for normalized u."""
    require_normalized(u, domain, "Lemma 4.2")
    N = domain.dim
    origin = np.zeros(N)
    _, R2 = _radii(domain, origin)
    mass = ma_mass(u, domain, level, workers=workers)
    lhs = R2 ** (-N)
    rhs = mass.value / unit_ball_volume(N)
    report = InequalityReport(
        check="lemma42",
        lhs=lhs,
        rhs=rhs,
        grid={"R2": R2, "constant": 1 / unit_ball_volume(N)},
        passed=lhs <= rhs * (1 + PASS_RTOL),
        family=u.tag,
    )
    verdict = "pass" if report.passed else "FAIL"
    logger.info(f"lemma42 {u.tag}: {verdict}, margin {report.margin:.6g}")
    return report


def check_lemma43(
    u: ConvexFamily,
    domain: Domain,
    sigma: float = 0.5,
    level: Optional[int] = None,
    workers: int = 1,
) -> InequalityReport:
    """(2^N omega_N)^{-1} (1 - sigma)^N A(u, sigma Omega) <= R_1^{-N} for normalized u."""
    if not 0 < sigma < 1:
        raise ValueError(f"sigma must lie in (0, 1), got {sigma}")
    require_normalized(u, domain, "Lemma 4.3")
    N = domain.dim
    origin = np.zeros(N)
    R1, _ = _radii(domain, origin)
    constant = 2 ** N * unit_ball_volume(N)
    inner = ma_mass(u, domain.dilate(origin, sigma), level, workers=workers)
    lhs = (1 - sigma) ** N * inner.value / constant
    rhs = R1 ** (-N)
    report = InequalityReport(
        check="lemma43",
        lhs=lhs,
        rhs=rhs,
        grid={"sigma": sigma, "R1": R1, "constant": constant},
        passed=lhs <= rhs * (1 + PASS_RTOL),
        family=u.tag,
    )
    logger.info(f"lemma43 {u.tag} (sigma={sigma}): {'pass' if report.passed else 'FAIL'}")
    return report


CHECKS = {
    "c1n": check_c1n,
    "gradient": check_gradient,
    "cone": check_cone_lemma,
    "lemma41": check_lemma41,
    "lemma42": check_lemma42,
    "lemma43": check_lemma43,
}


def implied_constant(reports: Sequence[InequalityReport]) -> float:
    """Largest ratio over a set of reports."""
    if not reports:
        raise ValueError("No reports to take a constant from")
    return max(r.ratio for r in reports)

