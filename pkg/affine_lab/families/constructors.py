"""
Constructors for the explicit non-quadratic solution families.

Each ``make_*`` enforces its theorem's parameter range and returns the
family; ``build_solution`` wraps a family with its theta and, for the product
families, the trace of the exponent solve.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from affine_lab.errors import ParameterRangeError
from affine_lab.models import Solution
from affine_lab.surfaces import (
    ConvexFamily,
    ExpPower,
    HalfExp,
    PolynomialCurve,
    PowerCurve,
    ProductFull,
    ProductHalfSpace,
    SumCurve,
    TWSeparable,
    WarrenSeparable,
)
from .algebra import solve_alpha_full, solve_alpha_halfspace
from .ranges import THEOREMS, theorem_range
from .riccati import riccati_phi

logger = logging.getLogger(__name__)

TW_R9_THETA = 11 / 12
TW_R9_N = 10
# the n = 9 instance of Theorem 9.1; "tw-r9" is an alias
TW_VARIANTS = ("tw-paper", "tw-r9")


def _positive(name: str, value: float, theorem: str) -> None:
    if not value > 0:
        raise ParameterRangeError(f"{name} must be positive per {theorem}, got {value}")


def make_thm81(
    N: int, theta: float, C1: float = 1.0, C2: float = 1.0, C3: float = 0.0, C4: float = 0.0
) -> WarrenSeparable:
    """
    u = C1 |y|^2 + C2 t^(2 - 1/theta) + C3 t + C4 on t > 0.

    Raises:
        ParameterRangeError: If theta is outside (0, 1/2) or a constant has the wrong sign
    """
    theorem_range("8.1", N).require(theta)
    _positive("C1", C1, "Theorem 8.1")
    _positive("C2", C2, "Theorem 8.1")
    if C3 < 0 or C4 < 0:
        raise ParameterRangeError(f"C3, C4 must be nonnegative per Theorem 8.1, got {C3}, {C4}")
    phi = SumCurve([PowerCurve(C2, 2 - 1 / theta), PolynomialCurve([C4, C3])])
    return WarrenSeparable(PowerCurve(C1, 0), phi, N - 1)


def make_thm82(
    N: int, theta: float, C1: float = 1.0, C2: float = 1.0, C3: float = 0.0, C4: float = 0.0
) -> WarrenSeparable:
    """
    u = C1 |y|^2 / t + C2 t^(n + 2 - 1/theta) + C3 t + C4 on t > 0.

    Raises:
        ParameterRangeError: If theta is outside (0, 1/(N+1)) or C1, C2 <= 0
    """
    theorem_range("8.2", N).require(theta)
    _positive("C1", C1, "Theorem 8.2")
    _positive("C2", C2, "Theorem 8.2")
    n = N - 1
    phi = SumCurve([PowerCurve(C2, n + 2 - 1 / theta), PolynomialCurve([C4, C3])])
    return WarrenSeparable(PowerCurve(C1, -1), phi, n)


def make_riccati_family(
    N: int, theta: float, c3: float, c4: float = 1.0, c5: float = 0.0, c6: float = 0.0
) -> WarrenSeparable:
    """u = |y|^2 / t + phi(t) with phi from one branch of the Riccati family."""
    n = N - 1
    return WarrenSeparable(PowerCurve(1.0, -1), riccati_phi(n, theta, c3, c4, c5, c6), n)


def thm91_alphas(N: int):
    """The exponents alpha of the exponential family at theta = (N-1)/N."""
    alphas = [2.0]
    if N >= 3 and (N - 1) * (N - 2) != 2:
        alphas.append(float((N - 1) * (N - 2)))
    return alphas


def make_thm91(N: int, alpha: float = 2.0) -> ExpPower:
    """
    u = exp(|y|^alpha + t) with alpha = 2 or alpha = (N-1)(N-2).

    Raises:
        ParameterRangeError: If alpha is neither branch, or the second branch with N < 3
    """
    if N < 2:
        raise ParameterRangeError(f"Theorem 9.1 needs N >= 2, got N={N}")
    second = (N - 1) * (N - 2)
    if alpha == second and N < 3:
        raise ParameterRangeError("alpha = (N-1)(N-2) needs N >= 3 per Theorem 9.1")
    if alpha not in (2.0, float(second)):
        raise ParameterRangeError(
            f"alpha must be 2 or (N-1)(N-2) = {second} per Theorem 9.1, got {alpha}"
        )
    return ExpPower(alpha, N - 1)


def make_cor91(n: int, A, B=None, C: float = 0.0) -> HalfExp:
    """
    u = exp(y1^2 + t) + sum A^{ij} y_i y_j + B . y' + C over y' = (y2, ..., yn).

    Raises:
        ParameterRangeError: If A is not positive definite or has the wrong size
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape != (n - 1, n - 1):
        raise ParameterRangeError(
            f"A must be ({n - 1}, {n - 1}) per Corollary 9.1, got shape {A.shape}"
        )
    return HalfExp(A, B, C)


def make_tw_r9() -> TWSeparable:
    """phi = r^9, eta = 1/t with n = 9, a solution at theta = 11/12 away from y = 0."""
    return TWSeparable(PowerCurve(1.0, 9), PowerCurve(1.0, -1), TW_R9_N - 1)


def check_variant(theorem: str, variant: Optional[str]) -> None:
    """
    Reject variants a theorem does not have.

    Raises:
        ValueError: If the variant is unknown or belongs to another theorem
    """
    if variant is None:
        return
    if variant not in TW_VARIANTS:
        raise ValueError(f"Unknown variant: {variant}. Must be one of {TW_VARIANTS}")
    if theorem != "9.1":
        raise ValueError(f"Variant {variant} only applies to Theorem 9.1, got {theorem}")


def build_solution(
    theorem: str,
    N: int,
    theta: Optional[float] = None,
    variant: Optional[str] = None,
    alpha: Optional[float] = None,
    constants: Sequence[float] = (1.0, 1.0, 0.0, 0.0),
) -> Solution:
    """
    Construct a theorem's family at theta.

    Args:
        theorem: One of THEOREMS
        N: Ambient dimension
        theta: Exponent; fixed by the theorem for 9.1 and 9.1cor
        variant: "tw-paper" (alias "tw-r9") selects the n = 9, theta = 11/12
            instance of Theorem 9.1
        alpha: Branch exponent for Theorem 9.1
        constants: C1..C4 for Theorems 8.1 and 8.2

    Returns:
        Solution record

    Raises:
        ParameterRangeError: If a precondition of the theorem fails
        ValueError: If the theorem or the variant is unknown
    """
    if theorem not in THEOREMS:
        raise ValueError(f"Unknown theorem: {theorem}. Must be one of {THEOREMS}")
    check_variant(theorem, variant)
    if variant in TW_VARIANTS:
        if N != TW_R9_N:
            raise ParameterRangeError(f"The {variant} instance lives in N={TW_R9_N}, got N={N}")
        return Solution(theorem, N, TW_R9_THETA, make_tw_r9())

    rng = theorem_range(theorem, N)
    if rng.is_point:
        if theta is not None:
            rng.require(theta)
        theta = rng.lower
    elif theta is None:
        raise ParameterRangeError(f"{theorem}: theta is required ({rng.describe()})")

    family: ConvexFamily
    trace = None
    if theorem == "8.1":
        family = make_thm81(N, theta, *constants)
    elif theorem == "8.2":
        family = make_thm82(N, theta, *constants)
    elif theorem == "9.1":
        family = make_thm91(N, 2.0 if alpha is None else float(alpha))
    elif theorem == "9.1cor":
        family = make_cor91(N - 1, np.eye(N - 2))
    elif theorem == "10.1":
        exponents, trace = solve_alpha_halfspace(theta, N)
        family = ProductHalfSpace(exponents)
    else:
        exponents, trace = solve_alpha_full(theta, N)
        family = ProductFull(exponents)
    logger.info(f"Built {family.tag} family for theorem {theorem}, N={N}, theta={theta:.6g}")
    return Solution(theorem, N, float(theta), family, trace)


def nonquadratic_example(N: int, theta: float) -> Solution:
    """
    A Euclidean complete non-quadratic solution for any theta in (0, (N-1)/N].

    theta < 1/2 uses Theorem 8.1, theta = 1/2 the exponential family, theta
    in (1/2, (N-1)/N) the half-space products and theta = (N-1)/N Theorem 9.1.

    Raises:
        ParameterRangeError: If theta is outside (0, (N-1)/N] or N < 2
    """
    if N < 2:
        raise ParameterRangeError(f"N must be at least 2, got {N}")
    top = (N - 1) / N
    if not 0 < theta <= top + 1e-12:
        raise ParameterRangeError(f"θ must lie in (0,{top:g}] for N={N}, got {theta}")
    if theta < 0.5:
        return build_solution("8.1", N, theta)
    if math.isclose(theta, top, rel_tol=0, abs_tol=1e-12):
        return build_solution("9.1", N)
    if math.isclose(theta, 0.5, rel_tol=0, abs_tol=1e-12):
        return build_solution("9.1cor", N) if N >= 3 else build_solution("9.1", N)
    return build_solution("10.1", N, theta)
