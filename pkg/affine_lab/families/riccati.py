"""
The Riccati branch of the Warren ansatz with eta = 1/t.

With eta = 1/t the coefficients A and B vanish identically and C = 0 reduces
to t zeta' = theta (zeta + b1)^2 - b2 for zeta = t phi''' / phi'', where
b1 = (1 - 2 n theta) / (2 theta) and b2 = 1 / (4 theta). Its solutions are
indexed by c3 in (-inf, 0], with c3 = -inf as a separate branch.
"""

import logging
import math

import numpy as np

from affine_lab.errors import ParameterRangeError
from affine_lab.surfaces import PolynomialCurve, PowerCurve, RiccatiCurve, ScalarCurve, SumCurve

logger = logging.getLogger(__name__)


def riccati_constants(n: int, theta: float):
    """(b1, b2) of the Riccati equation."""
    return (1 - 2 * n * theta) / (2 * theta), 1 / (4 * theta)


def riccati_zeta(n: int, theta: float, c3: float, t):
    """Closed-form zeta = (n + (1/theta - n) c3 t) / (1 - c3 t)."""
    t = np.asarray(t, dtype=float)
    if c3 == -math.inf:
        return np.full(t.shape, n - 1 / theta)
    return (n + (1 / theta - n) * c3 * t) / (1 - c3 * t)


def riccati_phi(
    n: int, theta: float, c3: float, c4: float = 1.0, c5: float = 0.0, c6: float = 0.0
) -> ScalarCurve:
    """
    phi on t > 0 for one branch of the Riccati family.

    Args:
        n: Number of y variables
        theta: Exponent of w, positive
        c3: 0, a negative real, or -inf
        c4: Positive leading coefficient
        c5: Coefficient of t
        c6: Constant term

    Returns:
        ScalarCurve phi with derivatives through order four

    Raises:
        ParameterRangeError: If theta <= 0, c4 <= 0 or c3 > 0
    """
    if theta <= 0:
        raise ParameterRangeError(f"theta must be positive, got {theta}")
    if c4 <= 0:
        raise ParameterRangeError(f"c4 must be positive, got {c4}")
    if math.isnan(c3) or c3 > 0:
        raise ParameterRangeError(f"c3 must be 0, negative or -inf, got {c3}")
    affine = PolynomialCurve([c6, c5])
    if c3 == 0:
        return SumCurve([PowerCurve(c4, n + 2), affine])
    if c3 == -math.inf:
        return SumCurve([PowerCurve(c4, n + 2 - 1 / theta), affine])
    logger.debug(f"Quadrature-backed phi for c3={c3}, n={n}, theta={theta}")
    return RiccatiCurve(n, theta, c3, c4, c5, c6)


def riccati_zeta_residual(phi: ScalarCurve, n: int, theta: float, t) -> np.ndarray:
    """
    t zeta' - theta (zeta + b1)^2 + b2 with zeta = t phi''' / phi''.

    Args:
        phi: Curve to test
        n: Number of y variables
        theta: Exponent of w
        t: Abscissae, t > 0

    Returns:
        Residual array shaped like t
    """
    t = np.asarray(t, dtype=float)
    phi.check(t)
    _, _, f2, f3, f4 = phi.derivatives(t)
    zeta = t * f3 / f2
    dzeta = f3 / f2 + t * f4 / f2 - t * f3 * f3 / (f2 * f2)
    b1, b2 = riccati_constants(n, theta)
    return t * dzeta - theta * (zeta + b1) ** 2 + b2
