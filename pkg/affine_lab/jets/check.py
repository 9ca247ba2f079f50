"""
Finite-difference cross-check of jet derivatives.
"""

import itertools
import logging
from typing import Callable, Sequence

import numpy as np

from affine_lab.errors import DomainViolation, LabError
from .jet import MAX_ORDER, extract, get_layout, seed_point

logger = logging.getLogger(__name__)

# offsets and weights of second-order accurate central differences, per derivative order
CENTRAL_STENCILS = {
    0: ((0,), (1.0,)),
    1: ((-1, 1), (-0.5, 0.5)),
    2: ((-1, 0, 1), (1.0, -2.0, 1.0)),
    3: ((-2, -1, 1, 2), (-0.5, 1.0, -1.0, 0.5)),
    4: ((-2, -1, 0, 1, 2), (1.0, -4.0, 6.0, -4.0, 1.0)),
}


def _stencil(alpha: Sequence[int], x: np.ndarray, h: float):
    axes = [CENTRAL_STENCILS[a] for a in alpha]
    points, weights = [], []
    for picks in itertools.product(*[range(len(offs)) for offs, _ in axes]):
        offset = np.array([axes[d][0][k] for d, k in enumerate(picks)], dtype=float)
        weight = np.prod([axes[d][1][k] for d, k in enumerate(picks)])
        points.append(x + h * offset)
        weights.append(weight)
    return np.array(points), np.array(weights) / h ** sum(alpha)


def fd_crosscheck(f: Callable, x: Sequence[float], order: int, h: float) -> float:
    """
    Compare jet derivatives of ``f`` with central finite differences.

    Args:
        f: Scalar field taking a coordinate list (floats, arrays or jets)
        x: Point at which to compare
        order: Derivative order to compare (0..4)
        h: Finite-difference step

    Returns:
        Worst absolute discrepancy over all derivative entries of that order

    Raises:
        DomainViolation: If the stencil leaves the domain of f
    """
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"Order must lie in [0, {MAX_ORDER}], got {order}")
    x = np.asarray(x, dtype=float)
    dim = x.size

    jet = f(seed_point(x, order=max(order, 1)))
    layout = get_layout(dim, order)

    worst = 0.0
    for alpha in layout.indices[layout.degrees == order]:
        points, weights = _stencil(alpha, x, h)
        try:
            values = np.asarray(f([points[:, i] for i in range(dim)]), dtype=float)
        except LabError as e:
            raise DomainViolation(f"Finite-difference stencil leaves the domain of f: {e}") from e
        if not np.all(np.isfinite(values)):
            raise DomainViolation("Finite-difference stencil leaves the domain of f")
        estimate = float(np.dot(weights, values))
        exact = jet.derivative(alpha) if order > 0 else extract(jet, "value")
        worst = max(worst, abs(exact - estimate))

    logger.debug(f"fd_crosscheck order={order} h={h}: worst discrepancy {worst:.3e}")
    return worst
