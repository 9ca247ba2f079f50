"""
Data models for Affine Lab reports.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

CONVEXITY_STATES = ("strictly convex", "degenerate", "not convex")


@dataclass
class ResidualReport:
    """Residual of u^{ij} D_ij w at one point."""

    point: Tuple[float, ...]
    theta: float
    det: float
    w: float
    raw: float
    scale: float
    normalized: float

    def __post_init__(self):
        """Validate residual data."""
        if self.scale < 0:
            raise ValueError(f"Residual scale must be nonnegative, got {self.scale}")
        if self.det <= 0:
            raise ValueError(f"Residual reported at a degenerate Hessian (det={self.det})")

    def to_row(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {f"x{i}": v for i, v in enumerate(self.point)}
        row.update(
            theta=self.theta, det=self.det, w=self.w, raw=self.raw, scale=self.scale,
            normalized=self.normalized,
        )
        return row


@dataclass
class ConvexityReport:
    """Eigenvalue classification of a Hessian."""

    status: str
    min_eigenvalue: float
    max_eigenvalue: float

    def __post_init__(self):
        """Validate convexity status."""
        if self.status not in CONVEXITY_STATES:
            raise ValueError(
                f"Invalid convexity status: {self.status}. Must be one of {CONVEXITY_STATES}"
            )

    @property
    def strictly_convex(self) -> bool:
        return self.status == "strictly convex"


@dataclass
class DomainGeometry:
    """Diameter, inscribed radius and volume of a bounded domain."""

    diameter: float
    inradius: float
    volume: float

    def __post_init__(self):
        """Validate geometry."""
        if not math.isfinite(self.diameter):
            raise ValueError("Domain is unbounded (infinite diameter)")
        if self.diameter <= 0 or self.volume <= 0:
            raise ValueError("Domain must have positive diameter and volume")
        if self.inradius <= 0 or self.inradius > self.diameter / 2 * (1 + 1e-9):
            raise ValueError(
                f"Inscribed radius {self.inradius} incompatible with diameter {self.diameter}"
            )


@dataclass
class SolveTrace:
    """How an algebraic parameter condition was solved."""

    method: str
    iterations: int
    residual: float
    target: float
    brackets: List[Tuple[float, float]] = field(default_factory=list)

    def __post_init__(self):
        """Validate trace."""
        if self.method not in ("closed-form", "bisection"):
            raise ValueError(f"Invalid solve method: {self.method}")
        if self.iterations < 0:
            raise ValueError("Iteration count cannot be negative")

    @property
    def converged(self) -> bool:
        return abs(self.residual) <= 1e-12 * (1 + abs(self.target))


@dataclass
class MassReport:
    """Monge-Ampere mass with its refinement history."""

    value: float
    error_estimate: float
    levels: List[float] = field(default_factory=list)
    method: str = "quadrature"

    def __post_init__(self):
        """Validate mass data."""
        if not math.isfinite(self.value):
            raise ValueError("Mass value must be finite")
        if self.error_estimate < 0:
            raise ValueError("Error estimate cannot be negative")


@dataclass
class HolderEstimate:
    """Sampled supremum of a Hoelder quotient."""

    value: float
    exponent: float
    witness: Tuple[Tuple[float, ...], Tuple[float, ...]]
    pairs: int

    def __post_init__(self):
        """Validate estimate."""
        if not 0 < self.exponent <= 1:
            raise ValueError(f"Hoelder exponent must lie in (0, 1], got {self.exponent}")
        if self.pairs <= 0:
            raise ValueError("Hoelder estimate needs at least one sampled pair")


@dataclass
class InequalityReport:
    """Both sides of an inequality, the universal constant left out of the right side."""

    check: str
    lhs: float
    rhs: float
    witness: List[Tuple[float, ...]] = field(default_factory=list)
    grid: Dict[str, Any] = field(default_factory=dict)
    passed: Optional[bool] = None
    family: str = ""

    def __post_init__(self):
        """Validate report."""
        if not self.check:
            raise ValueError("Inequality check name cannot be empty")
        if not (self.rhs > 0 and math.isfinite(self.rhs)):
            raise ValueError(f"Right-hand side must be positive and finite, got {self.rhs}")
        if self.lhs < 0:
            raise ValueError(f"Left-hand side must be nonnegative, got {self.lhs}")

    @property
    def ratio(self) -> float:
        return self.lhs / self.rhs

    @property
    def margin(self) -> float:
        """rhs / lhs: how much room the inequality leaves."""
        return self.rhs / self.lhs if self.lhs > 0 else math.inf

    def to_row(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {"check": self.check, "family": self.family}
        row.update({"lhs": self.lhs, "rhs": self.rhs, "ratio": self.ratio})
        if self.passed is not None:
            row["passed"] = self.passed
        for i, point in enumerate(self.witness):
            row[f"witness{i}"] = " ".join(repr(float(c)) for c in point)
        row.update({f"grid_{k}": v for k, v in sorted(self.grid.items())})
        return row


@dataclass
class JohnNormalization:
    """Affine map T(x) = scale * matrix @ (x - center) with det(matrix) = 1."""

    matrix: np.ndarray
    scale: float
    center: np.ndarray
    rho: float

    def __post_init__(self):
        """Validate normalization."""
        if self.scale <= 0:
            raise ValueError("Normalization scale must be positive")
        if self.rho < 1 - 1e-9:
            raise ValueError(f"Sandwich ratio must be at least 1, got {self.rho}")

    def apply(self, points: Sequence) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return self.scale * (points - self.center) @ self.matrix.T


@dataclass
class TrendTable:
    """A quantity tabulated along a refinement sequence."""

    label: str
    scales: List[float]
    values: List[float]

    def __post_init__(self):
        """Validate table."""
        if len(self.scales) != len(self.values):
            raise ValueError("Trend scales and values must have equal length")

    @property
    def is_growing(self) -> bool:
        return len(self.values) >= 2 and all(
            b > a for a, b in zip(self.values, self.values[1:])
        )

    @property
    def relative_spread(self) -> float:
        """Relative change between the last two entries."""
        if len(self.values) < 2:
            return math.inf
        a, b = self.values[-2], self.values[-1]
        return abs(b - a) / max(abs(b), 1e-300)

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {"label": self.label, "scale": s, "value": v}
            for s, v in zip(self.scales, self.values)
        ]


@dataclass
class ScanRow:
    """One theta sample of a theorem scan."""

    theorem: str
    N: int
    theta: float
    parameters: Dict[str, Any]
    max_residual: float
    passed: bool

    def to_row(self) -> Dict[str, Any]:
        row: Dict[str, Any] = {"theorem": self.theorem, "N": self.N, "theta": self.theta}
        row.update(self.parameters)
        row.update(max_residual=self.max_residual, passed=self.passed)
        return row


@dataclass
class Solution:
    """A theorem's solution family at a fixed theta."""

    theorem: str
    N: int
    theta: float
    family: Any
    trace: Optional[SolveTrace] = None

    def __post_init__(self):
        """Validate solution record."""
        if not 0 < self.theta < 1:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        if self.family.dim != self.N:
            raise ValueError(f"Family dimension {self.family.dim} does not match N={self.N}")

    def to_dict(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"theorem": self.theorem, "N": self.N, "theta": self.theta}
        doc["family"] = self.family.to_dict()
        if self.trace is not None:
            doc["iterations"] = self.trace.iterations
            doc["solve_residual"] = self.trace.residual
        return doc


@dataclass
class RunReport:
    """Everything one command produces: table rows, a structured bundle and the gate verdict."""

    command: str
    rows: List[Dict[str, Any]] = field(default_factory=list)
    bundle: Dict[str, Any] = field(default_factory=dict)
    passed: bool = True

    def __post_init__(self):
        """Validate report."""
        if not self.command:
            raise ValueError("Run report needs a command name")

    @property
    def stem(self) -> str:
        return self.command.replace(" ", "-")
