"""
Monge-Ampere mass: quadrature of det D^2u over a domain.
"""

import logging
from typing import Optional

import numpy as np
from scipy.integrate import quad

from affine_lab.errors import ConvexityViolation, NonIntegrableError
from affine_lab.models import MassReport
from affine_lab.parallel import map_chunks
from affine_lab.surfaces import Ball, ConvexFamily, Domain, sphere_area

logger = logging.getLogger(__name__)

# relative increment above which a non-shrinking refinement counts as divergence
DIVERGENCE_TOL = 1e-2


def integrate_det(
    u: ConvexFamily, domain: Domain, level: Optional[int] = None, workers: int = 1
) -> float:
    """
    One quadrature of det D^2u over a domain at a fixed level, atoms included.

    Nodes outside the family's admissible domain form a null set and are
    skipped; point masses of u inside the domain are added.

    Args:
        u: Convex family
        domain: Integration domain
        level: Quadrature level (defaults to the domain's own)
        workers: Worker pool size

    Returns:
        Mass estimate
    """
    points, weights = domain.quadrature(level)
    keep = u.contains(points)
    dets = np.asarray(map_chunks(u.dets, points[keep], workers), dtype=float)
    total = float(np.sum(weights[keep] * dets))
    for point, mass in u.atoms():
        if domain.contains(point)[0]:
            total += mass
    return total


def _radial_mass(u: ConvexFamily, ball: Ball) -> MassReport:
    c, p = u.radial_profile()
    q = p + u.dim - 1
    if q <= -1:
        raise NonIntegrableError(f"det D^2u ~ r^{p:g} is not integrable at the center in N={u.dim}")
    # weight 'alg' integrates r^q (R - r)^0 exactly at the singular end
    value, err = quad(lambda r: 1.0, 0.0, ball.radius, weight="alg", wvar=(q, 0.0))
    scale = c * sphere_area(u.dim)
    return MassReport(value=scale * value, error_estimate=abs(scale) * err, method="radial")


def ma_mass(
    u: ConvexFamily,
    domain: Domain,
    level: Optional[int] = None,
    levels: int = 3,
    workers: int = 1,
) -> MassReport:
    """
    Monge-Ampere mass of u over a domain with a refinement error estimate.

    Radial families on a ball about their center reduce to a one-dimensional
    integral with the algebraic singularity handled by the quadrature weight.
    Otherwise the domain quadrature is repeated over successive levels and the
    last increment is reported as the error.

    Args:
        u: Convex family
        domain: Integration domain
        level: First quadrature level (defaults to the domain's own)
        levels: Number of refinement levels
        workers: Worker pool size

    Returns:
        MassReport

    Raises:
        NonIntegrableError: If the estimates keep growing under refinement
    """
    if u.dim != domain.dim:
        raise ValueError(f"Family dimension {u.dim} does not match domain dimension {domain.dim}")
    if levels < 1:
        raise ValueError(f"Need at least one quadrature level, got {levels}")
    if (
        u.radial_profile() is not None
        and isinstance(domain, Ball)
        and np.allclose(domain.center, u.radial_center)
    ):
        report = _radial_mass(u, domain)
        logger.debug(f"Radial mass of {u.tag} on {domain.tag}: {report.value:.12g}")
        return report

    start = domain.level if level is None else int(level)
    values = [integrate_det(u, domain, start + k, workers) for k in range(levels)]
    if not np.all(np.isfinite(values)):
        raise NonIntegrableError(f"Mass of {u.tag} on {domain.tag} is not finite: {values}")
    if values[-1] < 0:
        raise ConvexityViolation(f"Negative mass {values[-1]} for {u.tag}: u is not convex here")
    steps = np.abs(np.diff(values))
    if steps.size >= 2 and steps[-1] >= steps[-2] and steps[-1] > DIVERGENCE_TOL * abs(values[-1]):
        raise NonIntegrableError(
            f"Mass of {u.tag} on {domain.tag} diverges under refinement: {values}"
        )
    error = float(steps[-1]) if steps.size else 0.0
    logger.info(f"Mass of {u.tag} on {domain.tag}: {values[-1]:.10g} (+/- {error:.2e})")
    return MassReport(value=values[-1], error_estimate=error, levels=values)
