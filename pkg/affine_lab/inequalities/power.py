"""
Radial counterexample u = |x|^beta - 1 on the unit ball, 1 < beta < 1 + alpha.

det D^2u = beta^N (beta - 1) |x|^{N(beta - 2)} is integrable for every
beta > 1, yet Du is only C^{beta - 1} at the origin, so no C^{1,alpha} bound
can follow from the mass alone.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List

import numpy as np

from affine_lab.errors import ParameterRangeError
from affine_lab.mameasure import integrate_det, ma_mass
from affine_lab.models import MassReport, TrendTable
from affine_lab.surfaces import Ball, PowerRadial
from .holder import gradient_holder_trend

logger = logging.getLogger(__name__)

MASS_RTOL = 1e-2


@dataclass
class PowerCounterexample:
    """Mass and gradient Hoelder trend of |x|^beta - 1."""

    beta: float
    alpha: float
    dim: int
    mass: MassReport
    trend: TrendTable
    mass_levels: List[float] = field(default_factory=list)

    @property
    def mass_stable(self) -> bool:
        """Last refinement step of the graded quadrature within 1% of the exact mass."""
        if not self.mass_levels:
            return False
        return abs(self.mass_levels[-1] - self.mass.value) <= MASS_RTOL * abs(self.mass.value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "beta": self.beta,
            "alpha": self.alpha,
            "dim": self.dim,
            "mass": self.mass.value,
            "mass_method": self.mass.method,
            "mass_levels": list(self.mass_levels),
            "mass_stable": self.mass_stable,
            "trend": self.trend.rows(),
            "trend_growing": self.trend.is_growing,
        }


def power_counterexample(
    beta: float, alpha: float, N: int = 2, levels: int = 4, workers: int = 1
) -> PowerCounterexample:
    """
    Mass refinement sequence and C^{1,alpha} divergence trend of |x|^beta - 1 on B_1.

    Args:
        beta: Exponent in (1, 1 + alpha)
        alpha: Hoelder exponent in (0, 1)
        N: Dimension
        levels: Refinement levels for both sequences
        workers: Worker pool size

    Raises:
        ParameterRangeError: If alpha or beta is out of range
    """
    if not 0 < alpha < 1:
        raise ParameterRangeError(f"alpha must lie in (0,1) per Theorem 3.1, got {alpha}")
    if not 1 < beta < 1 + alpha:
        raise ParameterRangeError(
            f"beta must lie in (1,1+alpha) = (1,{1 + alpha:g}) per Theorem 3.1, got {beta}"
        )
    u = PowerRadial(beta, N)
    ball = Ball(np.zeros(N), 1.0)
    mass = ma_mass(u, ball, workers=workers)
    grading = max(1.0, 1.0 / (N * (beta - 1)))
    graded = Ball(np.zeros(N), 1.0, grading=grading)
    mass_levels = [integrate_det(u, graded, level, workers) for level in range(levels)]
    trend = gradient_holder_trend(u, ball, alpha, np.zeros(N), levels, workers=workers)
    bundle = PowerCounterexample(beta, alpha, N, mass, trend, mass_levels)
    logger.info(
        f"Power counterexample beta={beta}, alpha={alpha}, N={N}: mass {mass.value:.6g}, "
        f"gradient Hoelder trend {trend.values}"
    )
    return bundle
