"""
Affine normalization of convex bodies through an approximate minimum-volume
enclosing ellipsoid (Khachiyan's barycentric coordinate ascent).
"""

import logging
import math
from typing import Tuple, Union

import numpy as np
from scipy.spatial import ConvexHull

from affine_lab.errors import DegenerateSetError
from affine_lab.models import JohnNormalization
from affine_lab.surfaces import StarPolytope
from .sublevel import SubLevelSet

logger = logging.getLogger(__name__)

KHACHIYAN_TOL = 1e-4
KHACHIYAN_LIMIT = 10000

Body = Union[SubLevelSet, StarPolytope, np.ndarray]


def _hull(points: np.ndarray) -> ConvexHull:
    if points.ndim != 2 or points.shape[0] <= points.shape[1]:
        raise DegenerateSetError(f"Need more than {points.shape[-1]} points, got {points.shape}")
    try:
        return ConvexHull(points)
    except Exception as e:
        raise DegenerateSetError(f"Body is flat: {e}") from e


def khachiyan(
    points: np.ndarray, tol: float = KHACHIYAN_TOL, limit: int = KHACHIYAN_LIMIT
) -> Tuple[np.ndarray, np.ndarray, int]:
    """
    Approximate minimum-volume ellipsoid (x - c)^T A^{-1} (x - c) <= 1.

    Args:
        points: Hull vertices, shape (M, N) with M > N
        tol: Stopping tolerance on the weight update
        limit: Iteration cap

    Returns:
        Tuple (A, c, iterations); the eigenvalues of A are the squared semi-axes
    """
    M, d = points.shape
    Q = np.vstack((points.T, np.ones(M)))
    u = np.full(M, 1.0 / M)
    err = tol + 1.0
    iterations = 0
    while err > tol and iterations < limit:
        X_inv = np.linalg.inv(np.einsum("ij,j,kj", Q, u, Q))
        m = np.einsum("ji,jk,ki->i", Q, X_inv, Q)
        j = int(np.argmax(m))
        step = (1.0 - d / (m[j] - 1.0)) / (d + 1.0)
        u[j] -= 1.0
        err = math.sqrt(float(np.sum(u * u))) * abs(step)
        u *= 1.0 - step
        u[j] += 1.0
        u /= u.sum()
        iterations += 1
    if err > tol:
        logger.warning(f"Khachiyan iteration stopped at the cap with update {err:.2e}")
    c = u @ points
    A = (np.einsum("ji,j,jk", points, u, points) - np.outer(c, c)) * d
    return A, c, iterations


def john_normalize(S: Body, tol: float = KHACHIYAN_TOL) -> JohnNormalization:
    """
    Affine map T = scale * matrix @ (x - center), det(matrix) = 1, rounding a body.

    T(S) lies between the balls of radius 1/rho and rho about the origin.

    Args:
        S: Sub-level set, sampled polytope or an array of boundary points
        tol: Khachiyan tolerance

    Returns:
        JohnNormalization

    Raises:
        DegenerateSetError: If the body is flat
    """
    if isinstance(S, (SubLevelSet, StarPolytope)):
        points = S.boundary_points()
    else:
        points = np.atleast_2d(np.asarray(S, dtype=float))
    hull = _hull(points)
    vertices = points[hull.vertices]
    A, c, iterations = khachiyan(vertices, tol)
    eig, V = np.linalg.eigh(A)
    if eig[0] <= 0:
        raise DegenerateSetError(f"Enclosing ellipsoid is flat (smallest axis^2 = {eig[0]:.3e})")
    L = (V / np.sqrt(eig)) @ V.T
    dim = points.shape[1]
    lam = float(np.prod(eig)) ** (-0.5 / dim)
    matrix = L / lam

    mapped = (vertices - c) @ L.T
    outer = float(np.max(np.linalg.norm(mapped, axis=1)))
    inner = float(np.min(-_hull(mapped).equations[:, -1]))
    if inner <= 0:
        raise DegenerateSetError("Ellipsoid center lies on the boundary of the body")
    rho = math.sqrt(outer / inner)
    scale = lam / math.sqrt(outer * inner)
    logger.debug(f"John normalization after {iterations} iterations: rho={rho:.6g}")
    return JohnNormalization(matrix=matrix, scale=scale, center=c, rho=rho)
