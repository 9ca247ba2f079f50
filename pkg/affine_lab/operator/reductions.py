"""
Closed-form reductions of the affine maximal type operator.

Each separable or product ansatz collapses u^{ij} D_ij w to an algebraic
expression in the parameters. These serve as independent oracles for the
generic jet residual: every reduction comes with the positive factor that
links it to the raw generic residual at a point.
"""

import logging
from typing import Sequence, Tuple

import numpy as np

from affine_lab.errors import DegenerateHessianError, DomainViolation, ParameterRangeError
from affine_lab.jets import seed_variable
from affine_lab.surfaces import ScalarCurve

logger = logging.getLogger(__name__)


def _eta_profile(eta: ScalarCurve, t: float) -> Tuple[float, float, float, float, float]:
    """eta, eta' and P = eta'' - 2 eta'^2 / eta with P', P''."""
    E = eta(seed_variable(0, float(t), 1))
    E1 = E.differentiate(0)
    E2 = E1.differentiate(0)
    P = E2 - 2.0 * E1 * E1 / E
    P1 = P.differentiate(0)
    P2 = P1.differentiate(0)
    return E.value, E1.value, P.value, P1.value, P2.value


def warren_reduction(
    eta: ScalarCurve, phi: ScalarCurve, theta: float, n: int, t: float
) -> Tuple[float, float, float]:
    """
    Coefficients A, B, C with u^{ij} w_ij proportional to A r^4 + B r^2 + C
    for u = |y|^2 eta(t) + phi(t).

    Args:
        eta: Curve multiplying |y|^2, positive at t
        phi: Curve added in t
        theta: Exponent of w
        n: Number of y variables
        t: Abscissa

    Returns:
        Tuple (A, B, C)

    Raises:
        DomainViolation: If eta(t) <= 0
    """
    e0, e1, P, P1, P2 = _eta_profile(eta, t)
    if not e0 > 0:
        raise DomainViolation(f"eta({t}) = {e0:.3e} must be positive")
    e2 = eta.derivatives(np.asarray(float(t)))[2]
    e2 = float(e2)
    _, _, f2, f3, f4 = (float(v) for v in phi.derivatives(np.asarray(float(t))))
    q = e1 * e1 / e0

    A = (
        P * P * (4 * (theta - n + 1) * e2 + ((2 * n * n - 8 * n) * theta + (6 * n - 4)) * q)
        + (4 * n * theta - 8 * theta) * e1 * P * P1
        + 2 * (theta + 1) * e0 * P1 * P1
        - 2 * e0 * P * P2
    )
    q_coef = n * n * theta - 2 * n * theta - 2 * theta + 3 * n - 3
    B = (
        f2
        * (
            4 * ((theta - 2 * n + 1) * e2 + q_coef * q) * P
            + 4 * (n * theta + 2) * e1 * P1
            - 2 * e0 * P2
        )
        + f3 * (4 * (n * theta - 2 * theta - 2) * e1 * P + 4 * (theta + 1) * e0 * P1)
        + f4 * (-2 * e0 * P)
    )
    C = (
        f2 * f2 * (-4 * n * e2 + 2 * n * (n * theta + 3) * q)
        + 4 * n * theta * e1 * f2 * f3
        + 2 * (theta + 1) * e0 * f3 * f3
        - 2 * e0 * f2 * f4
    )
    return float(A), float(B), float(C)


def warren_scale(eta: ScalarCurve, phi: ScalarCurve, theta: float, n: int, y, t: float) -> float:
    """
    Positive factor with raw residual = scale * (A r^4 + B r^2 + C).

    The factor is theta (2 eta)^(-n theta - 1) psi^(-theta - 3), where
    psi = r^2 P + phi'' is det D^2u / (2 eta)^n.
    """
    e0, _, P, _, _ = _eta_profile(eta, t)
    r2 = float(np.dot(y, y))
    psi = r2 * P + float(phi.derivatives(np.asarray(float(t)))[2])
    if not (e0 > 0 and psi > 0):
        raise DegenerateHessianError(f"Warren ansatz is not convex at |y|^2={r2}, t={t}")
    return theta * (2 * e0) ** (-n * theta - 1) * psi ** (-theta - 3)


def warren_residual(eta: ScalarCurve, phi: ScalarCurve, theta: float, n: int, y, t: float) -> float:
    """Raw residual of the Warren ansatz predicted by the reduction."""
    A, B, C = warren_reduction(eta, phi, theta, n, t)
    r2 = float(np.dot(y, y))
    return warren_scale(eta, phi, theta, n, y, t) * (A * r2 * r2 + B * r2 + C)


def tw_exponential_condition(alpha: float, theta: float, n: int) -> Tuple[float, float]:
    """
    Coefficients (B1, B2) of r^(beta-2) and r^(alpha+beta-2) for u = exp(|y|^alpha + t).

    Here beta = -n theta (alpha - 2); both vanish exactly on the solution branches.

    Raises:
        ParameterRangeError: If alpha <= 1
    """
    if alpha <= 1:
        raise ParameterRangeError(f"alpha must exceed 1, got {alpha}")
    a, m = float(alpha), n + 1
    beta = -n * theta * (a - 2)
    B1 = beta * (beta - 1) + (n - 1) * (a - 1) * beta
    B2 = (
        -m * theta * a * (a + 2 * beta - 1)
        + 2 * m * theta * a * beta
        + a * (a - 1) * m * m * theta * theta
        - (n - 1) * m * a * (a - 1) * theta
    )
    return float(B1), float(B2)


def tw_exponential_residual(alpha: float, theta: float, n: int, y, t: float) -> float:
    """Raw residual of exp(|y|^alpha + t) predicted from (B1, B2)."""
    B1, B2 = tw_exponential_condition(alpha, theta, n)
    a = float(alpha)
    r = float(np.linalg.norm(y))
    if r <= 0:
        raise DomainViolation("The exponential ansatz is evaluated off the axis y = 0")
    beta = -n * theta * (a - 2)
    s = r ** a + t
    kappa = a ** (n * theta) * (a - 1) ** theta * np.exp((n + 1) * theta * s)
    numerator = B1 * r ** (beta - 2) + B2 * r ** (a + beta - 2)
    return float(numerator / (kappa * np.exp(s) * a * (a - 1) * r ** (a - 2)))


def _positive(alpha: Sequence[float]) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    if np.any(alpha <= 0):
        raise ParameterRangeError(f"All alpha_i must be positive, got {alpha.tolist()}")
    return alpha


def _monomial_weight(alpha: np.ndarray, theta: float, N: int, y: np.ndarray) -> float:
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise DomainViolation(f"Product families live on the positive orthant, got {y.tolist()}")
    k = (N * alpha + 2) * theta
    return float(np.prod(y ** alpha) * np.prod(alpha ** (-theta) * y ** k))


def product_halfspace_residual(alpha: Sequence[float], theta: float, N: int) -> float:
    """
    Algebraic condition for u = prod y_i^(-alpha_i) e^t; zero exactly on the solutions.

    Raises:
        ParameterRangeError: If some alpha_j <= 0 or len(alpha) != N - 1
    """
    alpha = _positive(alpha)
    if alpha.size != N - 1:
        raise ParameterRangeError(f"Half-space product needs N - 1 = {N - 1} exponents")
    k = (N * alpha + 2) * theta
    return float(
        np.sum(k * (k - 1) / alpha)
        - 2 * N * theta ** 2 * np.sum(N * alpha + 2)
        + N * N * theta ** 2 * (np.sum(alpha) + 1)
    )


def product_halfspace_scale(alpha: Sequence[float], theta: float, N: int, x) -> float:
    """Positive factor with raw residual = scale * product_halfspace_residual at x = (y, t)."""
    alpha = _positive(alpha)
    x = np.asarray(x, dtype=float)
    y, t = x[:-1], float(x[-1])
    return float(np.exp(-(1 + N * theta) * t) * _monomial_weight(alpha, theta, N, y))


def product_full_residual(alpha: Sequence[float], theta: float, N: int) -> float:
    """
    Algebraic condition for u = prod y_i^(-alpha_i) on the orthant.

    The off-diagonal sum runs over pairs j < k.

    Raises:
        ParameterRangeError: If some alpha_i <= 0 or len(alpha) != N
    """
    alpha = _positive(alpha)
    if alpha.size != N:
        raise ParameterRangeError(f"Full product needs N = {N} exponents")
    k = (N * alpha + 2) * theta
    beta_j = np.sum(alpha) - alpha + 1
    cross = (np.sum(k) ** 2 - np.sum(k * k)) / 2
    return float(np.sum(beta_j * k * (k - 1) / alpha) - 2 * cross)


def product_full_scale(alpha: Sequence[float], theta: float, N: int, y) -> float:
    """Positive factor with raw residual = scale * product_full_residual at y."""
    alpha = _positive(alpha)
    beta = float(np.sum(alpha)) + 1
    return beta ** (-1 - theta) * _monomial_weight(alpha, theta, N, np.asarray(y, dtype=float))
