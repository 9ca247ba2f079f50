"""
Generic residual of the affine maximal type operator.

For a convex u and w = (det D^2u)^(-theta) the residual is u^{ij} D_ij w,
where u^{ij} is the inverse Hessian. The Hessian entries are taken from the
fourth-order jet of u as second-order jets; their determinant, raised to
-theta, is again a second-order jet whose Hessian is D^2w.
"""

import logging
from typing import List, Sequence, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from affine_lab.errors import DegenerateHessianError
from affine_lab.jets import Jet, extract
from affine_lab.models import ResidualReport
from affine_lab.parallel import map_chunks
from affine_lab.surfaces import ConvexFamily

logger = logging.getLogger(__name__)

JetMatrix = List[List[Jet]]


def hessian_jets(u: ConvexFamily, points: np.ndarray) -> JetMatrix:
    """Second derivatives of u as second-order jets at a batch of points."""
    jet = u.jet(points)
    first = [jet.differentiate(i) for i in range(u.dim)]
    return [[first[i].differentiate(j) for j in range(u.dim)] for i in range(u.dim)]


def _check_pivot(pivot: Jet) -> None:
    values = np.atleast_1d(pivot.coeffs[0])
    if np.any(values <= 0) or not np.all(np.isfinite(values)):
        raise DegenerateHessianError(
            f"Hessian is not positive definite (elimination pivot {np.min(values):.3e})"
        )


def jet_det(H: JetMatrix) -> Jet:
    """
    Determinant of a symmetric positive definite jet matrix.

    Gaussian elimination without pivoting; every pivot must stay positive.

    Raises:
        DegenerateHessianError: If a pivot is not positive
    """
    n = len(H)
    A = [row[:] for row in H]
    det = None
    for k in range(n):
        pivot = A[k][k]
        _check_pivot(pivot)
        det = pivot if det is None else det * pivot
        inv = 1.0 / pivot
        for i in range(k + 1, n):
            factor = A[i][k] * inv
            for j in range(k + 1, n):
                A[i][j] = A[i][j] - factor * A[k][j]
    return det


def jet_inverse(H: JetMatrix) -> JetMatrix:
    """Inverse of a symmetric positive definite jet matrix by Gauss-Jordan elimination."""
    n = len(H)
    zero = H[0][0] * 0.0
    A = [row[:] + [zero + (1.0 if i == j else 0.0) for j in range(n)] for i, row in enumerate(H)]
    for k in range(n):
        _check_pivot(A[k][k])
        inv = 1.0 / A[k][k]
        A[k] = [entry * inv for entry in A[k]]
        for i in range(n):
            if i != k:
                factor = A[i][k]
                A[i] = [a - factor * b for a, b in zip(A[i], A[k])]
    return [row[n:] for row in A]


def _hessian_values(H: JetMatrix, count: int) -> np.ndarray:
    n = len(H)
    values = np.empty((count, n, n))
    for i in range(n):
        for j in range(n):
            values[:, i, j] = np.broadcast_to(np.asarray(H[i][j].coeffs[0], dtype=float), (count,))
    return values


def _cholesky_inverse(hessian: np.ndarray) -> np.ndarray:
    """Inverse Hessians through LL^T; a failed factorization means D^2u is not positive definite."""
    eye = np.eye(hessian.shape[-1])
    inverse = np.empty_like(hessian)
    for k, h in enumerate(hessian):
        try:
            factor = cho_factor(h)
        except LinAlgError as e:
            raise DegenerateHessianError(f"Hessian is not positive definite: {e}") from e
        inverse[k] = cho_solve(factor, eye)
    return inverse


def _w_jet(H: JetMatrix, theta: float) -> Tuple[Jet, Jet]:
    det = jet_det(H)
    return det, det ** (-theta)


def w_value(u: ConvexFamily, theta: float, x) -> float:
    """
    w = (det D^2u(x))^(-theta).

    Raises:
        DegenerateHessianError: If the determinant is not positive
    """
    hessian = u.hessian(x)
    det = float(np.linalg.det(hessian))
    if not det > 0:
        raise DegenerateHessianError(f"det D^2u = {det:.3e} is not positive at {list(x)}")
    return det ** (-theta)


def _reports(u: ConvexFamily, theta: float, points: np.ndarray) -> List[ResidualReport]:
    count = points.shape[0]
    H = hessian_jets(u, points)
    inverse = _cholesky_inverse(_hessian_values(H, count))
    det, w = _w_jet(H, theta)
    d2w = np.broadcast_to(extract(w, "hessian"), (count, u.dim, u.dim))
    terms = inverse * d2w
    raw = terms.sum(axis=(1, 2))
    scale = np.abs(terms).max(axis=(1, 2))
    normalized = np.where(scale > 0, raw / np.where(scale > 0, scale, 1.0), 0.0)
    dets = np.broadcast_to(np.asarray(det.coeffs[0], dtype=float), (count,))
    ws = np.broadcast_to(np.asarray(w.coeffs[0], dtype=float), (count,))
    return [
        ResidualReport(
            point=tuple(float(c) for c in p),
            theta=float(theta),
            det=float(dets[k]),
            w=float(ws[k]),
            raw=float(raw[k]),
            scale=float(scale[k]),
            normalized=float(normalized[k]),
        )
        for k, p in enumerate(points)
    ]


def residual(u: ConvexFamily, theta: float, x: Sequence[float]) -> ResidualReport:
    """
    Residual u^{ij} D_ij w at one point.

    Args:
        u: Convex family
        theta: Exponent in w = (det D^2u)^(-theta)
        x: Interior point of the admissible domain

    Returns:
        ResidualReport with raw, scale and normalized residual

    Raises:
        DomainViolation: If x is outside the admissible domain
        DegenerateHessianError: If D^2u(x) is not positive definite
    """
    return _reports(u, theta, np.asarray(x, dtype=float).reshape(1, -1))[0]


def residual_batch(
    u: ConvexFamily, theta: float, points: np.ndarray, workers: int = 1
) -> List[ResidualReport]:
    """Residual reports at many points, computed in fixed-size blocks."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    reports = map_chunks(lambda block: _reports(u, theta, block), points, workers)
    logger.debug(
        f"{u.tag}: {len(reports)} residuals, worst normalized "
        f"{max(abs(r.normalized) for r in reports):.3e}"
    )
    return reports


def max_normalized_residual(
    u: ConvexFamily, theta: float, points: np.ndarray, workers: int = 1
) -> float:
    return max(abs(r.normalized) for r in residual_batch(u, theta, points, workers))


def divergence_residual(u: ConvexFamily, theta: float, x: Sequence[float]) -> Tuple[float, float]:
    """
    Divergence form D_ij(U^{ij} w) with U the cofactor matrix of D^2u.

    The cofactor rows are divergence free, so this equals det(D^2u) u^{ij} w_ij.

    Returns:
        Tuple (divergence form, det * non-divergence form)
    """
    point = np.asarray(x, dtype=float).reshape(1, -1)
    H = hessian_jets(u, point)
    det, w = _w_jet(H, theta)
    inverse = jet_inverse(H)
    total = 0.0
    for i in range(u.dim):
        for j in range(u.dim):
            flux = inverse[i][j] * det * w
            alpha = [0] * u.dim
            alpha[i] += 1
            alpha[j] += 1
            total += float(np.asarray(flux.derivative(alpha)).ravel()[0])
    report = _reports(u, theta, point)[0]
    return total, report.det * report.raw
