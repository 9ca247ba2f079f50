"""
Algebra of the theta-alpha conditions for the product families, and the
critical dimension bounds.
"""

import logging
import math
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import bisect

from affine_lab.errors import BracketError, ParameterRangeError
from affine_lab.models import SolveTrace
from .ranges import theorem_range

logger = logging.getLogger(__name__)

VARIANTS = ("halfspace", "full")

BISECTION_XTOL = 1e-13
BISECTION_MAXITER = 200
# doublings allowed while bracketing the symmetric root
BRACKET_STEPS = 200


def _alpha(alpha: Sequence[float], size: int) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    if alpha.ndim != 1 or alpha.size != size:
        raise ValueError(f"Expected {size} exponents, got {alpha.tolist()}")
    if np.any(alpha <= 0):
        raise ParameterRangeError(f"All alpha_i must be positive, got {alpha.tolist()}")
    return alpha


def theta_of_alpha(alpha: Sequence[float], N: int, variant: str) -> float:
    """
    The theta at which a product family with exponents alpha solves the equation.

    Args:
        alpha: N - 1 exponents (halfspace) or N exponents (full)
        N: Ambient dimension
        variant: "halfspace" or "full"

    Returns:
        theta
    """
    if variant == "halfspace":
        S = float(np.sum(1.0 / _alpha(alpha, N - 1)))
        return (2 * S + N * (N - 1)) / (4 * S + N * N)
    if variant == "full":
        alpha = _alpha(alpha, N)
        S = float(np.sum(1.0 / alpha))
        beta = float(np.sum(alpha)) + 1
        return (2 * beta * S + (N * N - N) * beta - N) / (4 * beta * S + N * N * beta - N * N)
    raise ValueError(f"Unknown variant: {variant}. Must be one of {VARIANTS}")


def solve_alpha_halfspace(theta: float, N: int) -> Tuple[np.ndarray, SolveTrace]:
    """
    Symmetric exponents a * (1, ..., 1) solving the half-space condition.

    Raises:
        ParameterRangeError: If theta is outside (1/2, (N-1)/N)
    """
    theorem_range("10.1", N).require(theta)
    n = N - 1
    a = (4 * theta - 2) * n / (N * (N - 1 - theta * N))
    alpha = np.full(n, a)
    trace = SolveTrace(
        method="closed-form",
        iterations=0,
        residual=theta_of_alpha(alpha, N, "halfspace") - theta,
        target=theta,
    )
    logger.debug(f"Half-space exponent a={a:.15g} at theta={theta}, N={N}")
    return alpha, trace


def general_F(alpha: Sequence[float], theta: float, N: int) -> float:
    """(4 theta - 2) beta gamma + (N^2 - 4)(theta - (N+1)/(N+2)) beta for N exponents."""
    alpha = _alpha(alpha, N)
    beta = float(np.sum(alpha)) + 1
    gamma = float(np.sum(1.0 / alpha)) + 1
    return (4 * theta - 2) * beta * gamma + (N * N - 4) * (theta - (N + 1) / (N + 2)) * beta


def symmetric_F(s: float, theta: float, N: int) -> float:
    """general_F on the symmetric ray alpha = s * (1, ..., 1)."""
    if s <= 0:
        raise ParameterRangeError(f"s must be positive, got {s}")
    beta = N * s + 1
    gamma = N / s + 1
    return (4 * theta - 2) * beta * gamma + (N * N - 4) * (theta - (N + 1) / (N + 2)) * beta


def full_target(theta: float, N: int) -> float:
    return N * (N * theta - 1)


def _bracket(fn, start: float = 1.0) -> Tuple[float, float, List[Tuple[float, float]]]:
    lo = hi = start
    history = [(lo, hi)]
    for _ in range(BRACKET_STEPS):
        if fn(lo) > 0:
            break
        lo /= 2
        history.append((lo, hi))
    for _ in range(BRACKET_STEPS):
        if fn(hi) < 0:
            break
        hi *= 2
        history.append((lo, hi))
    if not (fn(lo) > 0 > fn(hi)):
        raise BracketError(f"No sign change of F - target on [{lo:.3e}, {hi:.3e}]")
    return lo, hi, history


def solve_alpha_full(theta: float, N: int) -> Tuple[np.ndarray, SolveTrace]:
    """
    Symmetric exponents s * (1, ..., 1) for the full product family, by bisection.

    F - target tends to +inf as s -> 0 and to -inf as s -> inf inside the range,
    so a sign change is always found by doubling.

    Raises:
        ParameterRangeError: If theta is outside (1/2, (N-1)/N)
        BracketError: If no sign change is found
    """
    theorem_range("10.2", N).require(theta)
    target = full_target(theta, N)

    def excess(s: float) -> float:
        return symmetric_F(s, theta, N) - target

    lo, hi, history = _bracket(excess)
    # absolute tolerance, tightened below s = 1 so F is resolved where it is steep
    xtol = BISECTION_XTOL * min(1.0, lo)
    s, info = bisect(
        excess, lo, hi, xtol=xtol, maxiter=BISECTION_MAXITER, full_output=True, disp=False
    )
    trace = SolveTrace(
        method="bisection",
        iterations=int(info.iterations),
        residual=excess(s),
        target=target,
        brackets=history,
    )
    if not info.converged:
        logger.warning(f"Bisection hit the iteration cap at theta={theta}, N={N}")
    logger.debug(f"Full-product exponent s={s:.15g} after {info.iterations} iterations")
    return np.full(N, float(s)), trace


def symmetric_F_min(theta: float, N: int) -> Tuple[float, float]:
    """
    Critical point x and minimum F(x) on the symmetric ray for theta > (N-1)/N.

    The minimum equals 5N^2 theta - (3N^2 - N) + 2N^2 sqrt((4 theta - 2)(theta - (N-1)/N)).

    Raises:
        ParameterRangeError: If theta <= (N-1)/N
    """
    edge = (N - 1) / N
    if theta <= edge:
        raise ParameterRangeError(
            f"θ must exceed (N-1)/N = {edge:g} for the symmetric minimum, got {theta}"
        )
    x = math.sqrt((4 * theta - 2) / (theta - edge)) / N
    return x, symmetric_F(x, theta, N)


def symmetric_F_min_closed_form(theta: float, N: int) -> float:
    edge = (N - 1) / N
    return 5 * N * N * theta - (3 * N * N - N) + 2 * N * N * math.sqrt(
        (4 * theta - 2) * (theta - edge)
    )


def critical_dimension_bounds(theta: float) -> Tuple[int, int]:
    """
    Lower and upper bounds on the critical dimension N*(theta).

    upper = [1/(1-theta)]_* - 1 with [z]_* the smallest integer >= z; the lower
    bound is the largest applicable case: 1 on (0, 3/4), 2 on [3/4, 1), and N
    when theta = (N+1)/(N+2).

    Raises:
        ParameterRangeError: If theta is outside (0, 1)
    """
    if not 0 < theta < 1:
        raise ParameterRangeError(f"θ must lie in (0,1) for the critical dimension, got {theta}")
    z = 1.0 / (1.0 - theta)
    if abs(z - round(z)) < 1e-9:
        z = float(round(z))
    upper = math.ceil(z) - 1
    lower = 1 if theta < 0.75 else 2
    affine_dim = (2 * theta - 1) / (1 - theta)
    if abs(affine_dim - round(affine_dim)) < 1e-9 and round(affine_dim) >= 1:
        lower = max(lower, int(round(affine_dim)))
    return lower, upper
