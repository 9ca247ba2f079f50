"""
Base convex family interface.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from affine_lab.errors import DomainViolation
from affine_lab.jets import MAX_ORDER, Jet, extract, seed_point
from affine_lab.models import ConvexityReport

logger = logging.getLogger(__name__)

# strict-interior margin, relative to the size of the point
DOMAIN_MARGIN = 1e-8

# degenerate/strict boundary, relative to the largest Hessian eigenvalue
CONVEXITY_EPS = 1e-10


class ConvexFamily(ABC):
    """
    A closed-form convex function on an open admissible domain.

    Subclasses write the function once in ``expression``; the same formula
    yields values on point clouds (numpy coordinates) and Taylor jets at
    seeded points.
    """

    tag: str = "family"

    def __init__(self, dim: int):
        """
        Initialize the family.

        Args:
            dim: Ambient dimension N
        """
        if dim < 1:
            raise ValueError(f"Dimension must be positive, got {dim}")
        self.dim = int(dim)

    @abstractmethod
    def expression(self, coords: Sequence[Any]) -> Any:
        """
        Evaluate u on a coordinate list.

        Args:
            coords: N coordinates, each a float, a numpy array or a Jet

        Returns:
            u in the same representation as the coordinates
        """
        pass

    @abstractmethod
    def parameters(self) -> Dict[str, Any]:
        """Serializable parameter record (without tag and dimension)."""
        pass

    def admissible(self, points: np.ndarray) -> np.ndarray:
        """Mask of points in the open admissible domain; everywhere by default."""
        return np.ones(points.shape[0], dtype=bool)

    def closed_form_det(self, x) -> Any:
        """det D^2u from its closed form."""
        raise NotImplementedError(f"{type(self).__name__} has no closed-form determinant")

    def sample_box(self) -> Tuple[np.ndarray, np.ndarray]:
        """Box from which sample_points draws candidates."""
        return -np.ones(self.dim), np.ones(self.dim)

    # radial structure used by the mass quadrature: u depends on |x - center| only
    radial_center: Optional[np.ndarray] = None

    def atoms(self) -> List[Tuple[np.ndarray, float]]:
        """Points carrying Monge-Ampere mass that det D^2u does not see, with their masses."""
        return []

    def radial_profile(self) -> Optional[Tuple[float, float]]:
        """(c, p) with det D^2u = c * |x - radial_center|^p, or None."""
        return None

    def singular_points(self) -> List[np.ndarray]:
        """Minimum points excluded from the admissible domain (radial centers and atoms)."""
        points = [point for point, _ in self.atoms()]
        if self.radial_center is not None:
            points.append(self.radial_center)
        return points

    def tangent(self, x0) -> Tuple[float, np.ndarray]:
        """
        Value and gradient at x0 for a supporting plane.

        At a singular minimum point the zero subgradient is used.

        Raises:
            DomainViolation: If x0 is neither admissible nor a singular minimum
        """
        x0 = np.asarray(x0, dtype=float)
        if self.contains(x0):
            return self.value(x0), self.gradient(x0)
        for point in self.singular_points():
            if np.allclose(point, x0, rtol=0, atol=DOMAIN_MARGIN):
                value = np.asarray(self.expression([float(c) for c in x0]), dtype=float)
                return float(value), np.zeros(self.dim)
        raise DomainViolation(f"No supporting plane of {self.tag} at {x0.tolist()}")

    # -- evaluation ------------------------------------------------------------

    def _as_points(self, x) -> Tuple[np.ndarray, bool]:
        arr = np.asarray(x, dtype=float)
        single = arr.ndim == 1
        pts = np.atleast_2d(arr)
        if pts.shape[-1] != self.dim:
            raise ValueError(f"Expected points of dimension {self.dim}, got shape {arr.shape}")
        return pts, single

    def contains(self, x) -> np.ndarray:
        pts, single = self._as_points(x)
        mask = self.admissible(pts) & np.all(np.isfinite(pts), axis=1)
        return bool(mask[0]) if single else mask

    def check(self, x) -> None:
        pts, _ = self._as_points(x)
        inside = self.admissible(pts)
        if not np.all(inside):
            bad = pts[~inside][0]
            raise DomainViolation(
                f"Point {bad.tolist()} lies outside the admissible domain of {self.tag}"
            )

    def jet(self, x, order: int = MAX_ORDER) -> Jet:
        """
        Full Taylor jet of u at a point or a (M, N) batch of points.

        Raises:
            DomainViolation: If a point lies outside the admissible domain
        """
        self.check(x)
        out = self.expression(seed_point(x, order))
        if not isinstance(out, Jet):
            # constant expression
            out = Jet.constant(out, self.dim, order)
        return out

    def values(self, points) -> np.ndarray:
        pts, _ = self._as_points(points)
        self.check(pts)
        out = self.expression([pts[:, i] for i in range(self.dim)])
        return np.broadcast_to(np.asarray(out, dtype=float), (pts.shape[0],)).copy()

    def value(self, x) -> float:
        return float(self.values(np.asarray(x, dtype=float).reshape(1, -1))[0])

    def gradients(self, points) -> np.ndarray:
        pts, _ = self._as_points(points)
        return np.broadcast_to(extract(self.jet(pts, order=1), "gradient"), pts.shape).copy()

    def gradient(self, x) -> np.ndarray:
        return self.gradients(np.asarray(x, dtype=float).reshape(1, -1))[0]

    def hessians(self, points) -> np.ndarray:
        pts, _ = self._as_points(points)
        shape = (pts.shape[0], self.dim, self.dim)
        return np.broadcast_to(extract(self.jet(pts, order=2), "hessian"), shape).copy()

    def hessian(self, x) -> np.ndarray:
        return self.hessians(np.asarray(x, dtype=float).reshape(1, -1))[0]

    def dets(self, points) -> np.ndarray:
        """det D^2u from the jet Hessian at a batch of points."""
        return np.linalg.det(self.hessians(points))

    def is_convex_at(self, x) -> ConvexityReport:
        """
        Classify the Hessian at a point by its eigenvalues.

        Returns:
            ConvexityReport with status strictly convex, degenerate or not convex
        """
        eig = np.linalg.eigvalsh(self.hessian(x))
        top = float(np.max(np.abs(eig)))
        eps = CONVEXITY_EPS * top
        low = float(eig[0])
        if top == 0.0 or abs(low) <= eps:
            status = "degenerate"
        elif low > 0:
            status = "strictly convex"
        else:
            status = "not convex"
        return ConvexityReport(status=status, min_eigenvalue=low, max_eigenvalue=float(eig[-1]))

    def sample_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        """
        Random admissible interior points.

        Args:
            rng: Seeded generator
            count: Number of points

        Returns:
            Array of shape (count, N)
        """
        lo, hi = self.sample_box()
        found: List[np.ndarray] = []
        total = 0
        for _ in range(100):
            batch = rng.uniform(lo, hi, size=(2 * count, self.dim))
            batch = batch[self.admissible(batch)]
            found.append(batch)
            total += batch.shape[0]
            if total >= count:
                return np.concatenate(found)[:count]
        raise DomainViolation(f"Could not sample {count} admissible points for {self.tag}")

    def to_dict(self) -> Dict[str, Any]:
        doc: Dict[str, Any] = {"family": self.tag, "dim": self.dim}
        doc.update(self.parameters())
        return doc

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim}, {self.parameters()})"


def margin(values: np.ndarray) -> np.ndarray:
    """Strict-interior margin for a coordinate array."""
    return DOMAIN_MARGIN * (1.0 + np.abs(values))
