"""
Slab counterexample u = zeta(x1) |x'|^2 - eta(x1) on {u < 0, 0 < x1 < omega}.

Near x1 = 0 the profiles are zeta = x1^gamma and eta = x1^lambda, so u(x1, 0)
behaves like -x1^lambda and is no better than C^lambda there, while the
Monge-Ampere mass stays finite as soon as gamma > 1/N.

Beyond sigma0 the pinch zeta''/zeta - 2 zeta'^2/zeta^2 is steered from its
value at sigma0 to -1/2 and held there. With psi = zeta'/zeta the pinch is
psi' - psi^2, so zeta follows from a Riccati equation. The pinch stays in
[-1, -1/4), which makes eta'' = pinch * eta + g2 oscillate faster than
eta'' + eta / 4 = 0, and eta crosses zero within a half period 4 pi. That
first zero is the width omega of the slab.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from affine_lab.errors import ConstructionError, ConvexityViolation, ParameterRangeError
from affine_lab.surfaces import (
    HermiteCurve,
    PiecewiseCurve,
    PowerCurve,
    ScalarCurve,
    SlabDomain,
    SlabSeparable,
)

logger = logging.getLogger(__name__)

GAMMA_BOUND = (math.sqrt(2) - 1) / 2
PINCH_BRACKET = (-0.75, -0.5)
PINCH_LIMITS = (-1.0, -0.25)
PINCH_TARGET = -0.5
STURM_WINDOW = 4 * math.pi
ODE_RTOL = 1e-12
ODE_ATOL = 1e-14
RAMP_NODES = 129
TAIL_NODES = 385
ETA_NODES = 513
VERIFY_POINTS = 1000
CONVEXITY_TOL = 1e-10


def lambda_roots(gamma: float) -> Tuple[float, float]:
    """
    Roots of lambda^2 - lambda + gamma (gamma + 1) = 0.

    Raises:
        ParameterRangeError: If gamma is outside (0, (sqrt(2) - 1) / 2)
    """
    if not 0 < gamma < GAMMA_BOUND:
        raise ParameterRangeError(
            f"gamma must lie in (0, (sqrt(2)-1)/2) = (0, {GAMMA_BOUND:.5f}) per Theorem 3.2, "
            f"got {gamma}"
        )
    root = math.sqrt(1 - 4 * gamma * (gamma + 1))
    return (1 - root) / 2, (1 + root) / 2


def default_sigma0(gamma: float) -> float:
    """The sigma0 at which the pinch -gamma (gamma + 1) / sigma0^2 equals -2/3."""
    return math.sqrt(1.5 * gamma * (gamma + 1))


def _check_sigma0(gamma: float, sigma0: float) -> None:
    if not sigma0 > 0:
        raise ParameterRangeError(f"sigma0 must be positive, got {sigma0}")
    p0 = -gamma * (gamma + 1) / sigma0 ** 2
    lo, hi = PINCH_BRACKET
    if not lo <= p0 < hi:
        raise ParameterRangeError(
            f"pinch {p0:.4g} at sigma0={sigma0} must lie in [-3/4, -1/2) per Lemma 3.2"
        )


def _smoothstep(tau: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """6 tau^5 - 15 tau^4 + 10 tau^3 on [0, 1] and its first two derivatives, clamped outside."""
    tau = np.clip(tau, 0.0, 1.0)
    s = tau ** 3 * (10 - 15 * tau + 6 * tau ** 2)
    s1 = 30 * tau ** 2 * (1 - tau) ** 2
    s2 = 60 * tau * (1 - tau) * (1 - 2 * tau)
    return s, s1, s2


def target_pinch(gamma: float, sigma0: float, x) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Prescribed pinch beyond sigma0 and its first two derivatives.

    -gamma (gamma + 1) / x^2 is blended into -1/2 over [sigma0, 2 sigma0].
    """
    x = np.asarray(x, dtype=float)
    c = gamma * (gamma + 1)
    ramp = sigma0
    s, s1, s2 = _smoothstep((x - sigma0) / ramp)
    s1, s2 = s1 / ramp, s2 / ramp ** 2
    p0, p1, p2 = -c / x ** 2, 2 * c / x ** 3, -6 * c / x ** 4
    gap = p0 - PINCH_TARGET
    return (
        p0 - s * gap,
        (1 - s) * p1 - s1 * gap,
        (1 - s) * p2 - 2 * s1 * p1 - s2 * gap,
    )


def pinch(zeta: ScalarCurve, x) -> np.ndarray:
    """zeta''/zeta - 2 zeta'^2 / zeta^2."""
    z0, z1, z2 = zeta.derivatives(np.asarray(x, dtype=float))[:3]
    return z2 / z0 - 2 * z1 ** 2 / z0 ** 2


def _pinch_stack(zeta: ScalarCurve, x: np.ndarray) -> List[np.ndarray]:
    """Pinch and its first two derivatives from the log-derivative psi = zeta'/zeta."""
    z0, z1, z2, z3, z4 = zeta.derivatives(x)
    psi = z1 / z0
    psi1 = z2 / z0 - psi ** 2
    psi2 = z3 / z0 - 3 * psi * psi1 - psi ** 3
    psi3 = z4 / z0 - 4 * psi * psi2 - 3 * psi1 ** 2 - 6 * psi ** 2 * psi1 - psi ** 4
    return [
        psi1 - psi ** 2,
        psi2 - 2 * psi * psi1,
        psi3 - 2 * psi1 ** 2 - 2 * psi * psi2,
    ]


def build_zeta(gamma: float, sigma0: Optional[float] = None) -> ScalarCurve:
    """
    zeta = x1^gamma up to sigma0, continued as a C^4 curve with its pinch in [-1, -1/4).

    Args:
        gamma: Exponent in (0, 1)
        sigma0: Breakpoint (default_sigma0 by default)

    Returns:
        Piecewise curve on (0, sigma0 + 4 pi + 1]

    Raises:
        ParameterRangeError: If gamma or sigma0 is out of range
        ConstructionError: If the integration fails or the pinch leaves its bracket
    """
    if not 0 < gamma < 1:
        raise ParameterRangeError(f"gamma must lie in (0, 1), got {gamma}")
    sigma0 = default_sigma0(gamma) if sigma0 is None else float(sigma0)
    _check_sigma0(gamma, sigma0)
    end = sigma0 + STURM_WINDOW + 1

    def rhs(x, y):
        p = target_pinch(gamma, sigma0, x)[0]
        return [p + y[0] ** 2, y[0]]

    sol = solve_ivp(
        rhs,
        (sigma0, end),
        [gamma / sigma0, gamma * math.log(sigma0)],
        method="DOP853",
        rtol=ODE_RTOL,
        atol=ODE_ATOL,
        dense_output=True,
    )
    if not sol.success:
        raise ConstructionError(f"Integration of zeta failed: {sol.message}")

    nodes = np.unique(
        np.concatenate(
            [
                np.linspace(sigma0, 2 * sigma0, RAMP_NODES),
                np.linspace(2 * sigma0, end, TAIL_NODES),
            ]
        )
    )
    psi, log_zeta = sol.sol(nodes)
    p, p1, p2 = target_pinch(gamma, sigma0, nodes)
    psi1 = p + psi ** 2
    psi2 = p1 + 2 * psi * psi1
    psi3 = p2 + 2 * psi1 ** 2 + 2 * psi * psi2
    stack = np.exp(log_zeta)[:, None] * np.column_stack(
        [
            np.ones_like(psi),
            psi,
            psi1 + psi ** 2,
            psi2 + 3 * psi * psi1 + psi ** 3,
            psi3 + 4 * psi * psi2 + 3 * psi1 ** 2 + 6 * psi ** 2 * psi1 + psi ** 4,
        ]
    )
    zeta = PiecewiseCurve(PowerCurve(1.0, gamma), HermiteCurve(nodes, stack), sigma0)

    grid = np.linspace(sigma0, sigma0 + 5, VERIFY_POINTS)
    values = pinch(zeta, grid)
    lo, hi = PINCH_LIMITS
    if not (np.all(values >= lo) and np.all(values < hi)):
        raise ConstructionError(
            f"zeta pinch left [-1, -1/4): range [{values.min():.6g}, {values.max():.6g}]"
        )
    logger.debug(f"zeta built for gamma={gamma}, sigma0={sigma0:.6g}, {nodes.size} nodes")
    return zeta


def g2_coefficient(gamma: float, lam: float) -> float:
    """k in g2 = k x1^(lambda - 2) near the origin; negative for lambda in (lambda1, lambda2)."""
    return lam * (lam - 1) + gamma * (gamma + 1)


def g2(gamma: float, lam: float, sigma0: float, x) -> np.ndarray:
    """k x1^(lambda - 2) up to sigma0, held at its sigma0 value beyond."""
    x = np.asarray(x, dtype=float)
    return g2_coefficient(gamma, lam) * np.minimum(x, sigma0) ** (lam - 2)


def build_eta(
    gamma: float, lam: float, zeta: ScalarCurve, sigma0: float
) -> Tuple[ScalarCurve, float]:
    """
    eta = x1^lambda up to sigma0, then the solution of eta'' = pinch * eta + g2.

    Args:
        gamma: Exponent of zeta
        lam: Exponent in (lambda1, lambda2)
        zeta: Curve from build_zeta
        sigma0: Breakpoint used for zeta

    Returns:
        Tuple (eta, omega) with omega the first zero of eta

    Raises:
        ParameterRangeError: If lambda is outside (lambda1, lambda2)
        ConstructionError: If eta has no transversal zero in [sigma0, sigma0 + 4 pi]
            or rises above its tangent line at sigma0
    """
    lam1, lam2 = lambda_roots(gamma)
    if not lam1 < lam < lam2:
        raise ParameterRangeError(
            f"lambda must lie in ({lam1:.6g}, {lam2:.6g}) per Theorem 3.2, got {lam}"
        )
    g_far = float(g2(gamma, lam, sigma0, sigma0))

    def rhs(x, y):
        return [y[1], float(pinch(zeta, x)) * y[0] + g_far]

    def crossing(x, y):
        return y[0]

    crossing.terminal = True  # type: ignore[attr-defined]
    crossing.direction = -1  # type: ignore[attr-defined]

    start = [sigma0 ** lam, lam * sigma0 ** (lam - 1)]
    sol = solve_ivp(
        rhs,
        (sigma0, sigma0 + STURM_WINDOW),
        start,
        method="DOP853",
        rtol=ODE_RTOL,
        atol=ODE_ATOL,
        events=crossing,
        dense_output=True,
    )
    if not sol.success:
        raise ConstructionError(f"Integration of eta failed: {sol.message}")
    if sol.t_events[0].size == 0:
        raise ConstructionError(
            f"eta has no zero in [sigma0, sigma0 + 4 pi] for gamma={gamma}, lambda={lam}"
        )
    omega = float(sol.t_events[0][0])
    slope = float(sol.y_events[0][0][1])
    if not slope < 0:
        raise ConstructionError(f"eta touches zero at {omega:.6g} without crossing")

    nodes = np.linspace(sigma0, omega, ETA_NODES)
    eta0, eta1 = sol.sol(nodes)
    eta0[-1] = 0.0
    P, P1, P2 = _pinch_stack(zeta, nodes)
    eta2 = P * eta0 + g_far
    eta3 = P1 * eta0 + P * eta1
    eta4 = P2 * eta0 + 2 * P1 * eta1 + P * eta2
    tangent = start[0] + start[1] * (nodes - sigma0)
    if np.any(eta0 > tangent + 1e-12 * max(1.0, float(np.max(np.abs(tangent))))):
        raise ConstructionError("eta rises above its tangent line at sigma0")

    right = HermiteCurve(nodes, np.column_stack([eta0, eta1, eta2, eta3, eta4]))
    eta = PiecewiseCurve(PowerCurve(1.0, lam), right, sigma0)
    logger.debug(f"eta built for gamma={gamma}, lambda={lam}: omega={omega:.6g}")
    return eta, omega


@dataclass
class SlabCounterexample:
    """The assembled slab: profiles, width and the family on its domain."""

    gamma: float
    lam: float
    sigma0: float
    omega: float
    zeta: ScalarCurve
    eta: ScalarCurve
    dim: int = 5
    family: SlabSeparable = field(init=False, repr=False)
    domain: SlabDomain = field(init=False, repr=False)

    def __post_init__(self):
        """Validate parameters and build the family and its domain."""
        if not self.gamma < self.lam:
            raise ParameterRangeError(f"Need gamma < lambda, got {self.gamma} >= {self.lam}")
        if not (math.isfinite(self.omega) and self.omega > self.sigma0):
            raise ConstructionError(f"Slab width {self.omega} must be finite and exceed sigma0")
        self.family = SlabSeparable(self.zeta, self.eta, self.dim)
        self.domain = SlabDomain(self.zeta, self.eta, self.omega, self.dim, self.sigma0)

    def convexity_margin(self, x1) -> np.ndarray:
        """(zeta'' - 2 zeta'^2 / zeta) eta / zeta - eta''; nonnegative where u is convex."""
        x1 = np.asarray(x1, dtype=float)
        return pinch(self.zeta, x1) * self.eta.value(x1) - self.eta.derivatives(x1)[2]

    def ode_residual(self, x1) -> np.ndarray:
        """eta'' - pinch * eta - g2, relative to max(|g2|, |eta|)."""
        x1 = np.asarray(x1, dtype=float)
        e0, _, e2 = self.eta.derivatives(x1)[:3]
        g = g2(self.gamma, self.lam, self.sigma0, x1)
        return (e2 - pinch(self.zeta, x1) * e0 - g) / np.maximum(np.abs(g), np.abs(e0))

    def verification_grid(self, count: int = VERIFY_POINTS) -> np.ndarray:
        return np.linspace(0.0, self.omega, count + 2)[1:-1]

    def verify_convexity(self, count: int = VERIFY_POINTS) -> float:
        """
        Smallest convexity margin over a grid of (0, omega).

        Raises:
            ConvexityViolation: If the margin is negative beyond tolerance
        """
        worst = float(np.min(self.convexity_margin(self.verification_grid(count))))
        if worst < -CONVEXITY_TOL:
            raise ConvexityViolation(f"Slab fails the convexity condition: margin {worst:.3e}")
        return worst

    def min_hessian_eigenvalue(self, rng: np.random.Generator, count: int = 10000) -> float:
        """Smallest Hessian eigenvalue of u over random points of the domain."""
        points = self.domain.sample(rng, count)
        points = points[self.family.contains(points)]
        return float(np.min(np.linalg.eigvalsh(self.family.hessians(points))))

    def to_dict(self, samples: int = 65) -> Dict[str, Any]:
        """Parameters plus profile samples for plotting."""
        x1 = np.linspace(0.0, self.omega, samples + 2)[1:-1]
        lam1, lam2 = lambda_roots(self.gamma)
        return {
            "gamma": self.gamma,
            "lambda": self.lam,
            "lambda_roots": [lam1, lam2],
            "sigma0": self.sigma0,
            "omega": self.omega,
            "dim": self.dim,
            "samples": {
                "x1": x1.tolist(),
                "zeta": self.zeta.value(x1).tolist(),
                "eta": self.eta.value(x1).tolist(),
                "profile": self.domain.profile(x1).tolist(),
            },
        }


def assemble_slab(
    gamma: float, lam: float, N: int = 5, sigma0: Optional[float] = None
) -> SlabCounterexample:
    """
    Build and verify the slab counterexample.

    Raises:
        ParameterRangeError: If N < 5, gamma is outside (1/N, (sqrt(2)-1)/2) or
            lambda is outside (lambda1, lambda2)
        ConvexityViolation: If the convexity grid check fails
    """
    if N < 5:
        raise ParameterRangeError(f"N must be at least 5 per Theorem 3.2, got {N}")
    if not 1 / N < gamma < GAMMA_BOUND:
        raise ParameterRangeError(
            f"gamma must lie in (1/N, (sqrt(2)-1)/2) = ({1 / N:.5f}, {GAMMA_BOUND:.5f}) "
            f"per Theorem 3.2, got {gamma}"
        )
    sigma0 = default_sigma0(gamma) if sigma0 is None else float(sigma0)
    zeta = build_zeta(gamma, sigma0)
    eta, omega = build_eta(gamma, lam, zeta, sigma0)
    slab = SlabCounterexample(gamma, lam, sigma0, omega, zeta, eta, N)
    margin = slab.verify_convexity()
    logger.info(
        f"Slab assembled: N={N}, gamma={gamma}, lambda={lam}, sigma0={sigma0:.6g}, "
        f"omega={omega:.6g}, convexity margin {margin:.3e}"
    )
    return slab
