"""
Admissible theta ranges of the solution theorems.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from affine_lab.errors import ParameterRangeError

logger = logging.getLogger(__name__)

THEOREMS = ("8.1", "8.2", "9.1", "9.1cor", "10.1", "10.2")

THEOREM_NAMES = {
    "8.1": "Theorem 8.1",
    "8.2": "Theorem 8.2",
    "9.1": "Theorem 9.1",
    "9.1cor": "Corollary 9.1",
    "10.1": "Theorem 10.1",
    "10.2": "Theorem 10.2",
}

# absolute tolerance for theorems pinned to a single theta
POINT_TOL = 1e-12


def _fmt(value: float) -> str:
    frac = Fraction(value).limit_denominator(1000)
    if abs(float(frac) - value) < 1e-12:
        return str(frac)
    return f"{value:g}"


@dataclass(frozen=True)
class ThetaRange:
    """An interval of theta tagged with the theorem that requires it."""

    theorem: str
    N: int
    lower: float
    upper: float
    lower_closed: bool = False
    upper_closed: bool = False

    def __post_init__(self):
        """Validate interval."""
        if self.lower > self.upper:
            raise ValueError(f"Empty theta range [{self.lower}, {self.upper}]")

    @property
    def is_point(self) -> bool:
        return self.lower == self.upper

    @property
    def empty(self) -> bool:
        return self.lower == self.upper and not (self.lower_closed and self.upper_closed)

    def contains(self, theta: float) -> bool:
        if self.is_point:
            return self.lower_closed and abs(theta - self.lower) <= POINT_TOL
        above = theta >= self.lower if self.lower_closed else theta > self.lower
        below = theta <= self.upper if self.upper_closed else theta < self.upper
        return above and below

    def describe(self) -> str:
        if self.is_point:
            return f"θ must equal {_fmt(self.lower)}"
        left = "[" if self.lower_closed else "("
        right = "]" if self.upper_closed else ")"
        return f"θ must lie in {left}{_fmt(self.lower)},{_fmt(self.upper)}{right}"

    def require(self, theta: float) -> float:
        """
        Return theta if admissible.

        Raises:
            ParameterRangeError: Naming the theorem and its range
        """
        if not self.contains(theta):
            raise ParameterRangeError(
                f"{self.describe()} per {THEOREM_NAMES[self.theorem]} (N={self.N}), got {theta}"
            )
        return float(theta)


def theorem_range(theorem: str, N: int) -> ThetaRange:
    """
    The theta range a solution theorem covers in dimension N.

    Args:
        theorem: One of THEOREMS
        N: Ambient dimension

    Returns:
        ThetaRange

    Raises:
        ValueError: If the theorem tag is unknown
        ParameterRangeError: If N is below the theorem's minimum dimension
    """
    if theorem not in THEOREMS:
        raise ValueError(f"Unknown theorem: {theorem}. Must be one of {THEOREMS}")
    minimum = 3 if theorem in ("10.1", "10.2", "9.1cor") else 2
    if N < minimum:
        raise ParameterRangeError(
            f"{THEOREM_NAMES[theorem]} needs N >= {minimum}, got N={N}"
        )
    if theorem == "8.1":
        return ThetaRange(theorem, N, 0.0, 0.5)
    if theorem == "8.2":
        return ThetaRange(theorem, N, 0.0, 1.0 / (N + 1))
    if theorem == "9.1":
        point = (N - 1) / N
        return ThetaRange(theorem, N, point, point, True, True)
    if theorem == "9.1cor":
        return ThetaRange(theorem, N, 0.5, 0.5, True, True)
    return ThetaRange(theorem, N, 0.5, (N - 1) / N)
