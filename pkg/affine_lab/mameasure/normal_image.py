"""
Normal image of piecewise-linear convex data by a discrete Legendre transform.

The subgradient image of the nodes inside a domain is measured in gradient
space: every slope p on a uniform grid is assigned the node where the plane
of slope p touches the data from below, and the cells of slopes whose contact
node lies in the domain are summed. The transform is separable, one axis at a
time, so the cost stays near n^N * m per axis instead of n^N * m^N.
"""

import itertools
import logging
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, HalfspaceIntersection

from affine_lab.errors import ConvexityViolation, DegenerateSetError
from affine_lab.models import TrendTable
from affine_lab.parallel import chunks, ordered_map
from affine_lab.surfaces import DOMAIN_MARGIN, ConvexFamily, Domain

logger = logging.getLogger(__name__)

MAX_DIM = 3
DEFAULT_PAD = 0.1
DEFAULT_LEVELS = (33, 65, 129)


def _directions(dim: int) -> List[np.ndarray]:
    """Axes and pairwise diagonals along which second differences must be nonnegative."""
    dirs = []
    for i in range(dim):
        e = np.zeros(dim, dtype=int)
        e[i] = 1
        dirs.append(e)
    for i, j in itertools.combinations(range(dim), 2):
        for sign in (1, -1):
            e = np.zeros(dim, dtype=int)
            e[i], e[j] = 1, sign
            dirs.append(e)
    return dirs


def _triple(arr: np.ndarray, d: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Views arr[x - d], arr[x], arr[x + d] over all x with both neighbours on the grid."""
    minus, center, plus = [], [], []
    for k, step in enumerate(d):
        n = arr.shape[k]
        if step == 0:
            minus.append(slice(None))
            center.append(slice(None))
            plus.append(slice(None))
        elif step == 1:
            minus.append(slice(0, n - 2))
            center.append(slice(1, n - 1))
            plus.append(slice(2, n))
        else:
            minus.append(slice(2, n))
            center.append(slice(1, n - 1))
            plus.append(slice(0, n - 2))
    return arr[tuple(minus)], arr[tuple(center)], arr[tuple(plus)]


class PLConvex:
    """
    Nodal values of a convex function on a uniform tensor grid.

    Nodes where the function is undefined carry +inf and take no part in the
    transform.
    """

    def __init__(self, axes: Sequence[np.ndarray], values: np.ndarray, check: bool = True):
        """
        Initialize the grid data.

        Args:
            axes: One increasing uniform coordinate array per dimension
            values: Nodal values of shape (len(axes[0]), ..., len(axes[-1]))
            check: Verify discrete convexity

        Raises:
            ConvexityViolation: If a second difference along an axis or diagonal is negative
        """
        self.axes = [np.asarray(a, dtype=float) for a in axes]
        self.dim = len(self.axes)
        if not 1 <= self.dim <= MAX_DIM:
            raise ValueError(f"Grids support 1 to {MAX_DIM} dimensions, not {self.dim}")
        self.values = np.asarray(values, dtype=float)
        if self.values.shape != tuple(a.size for a in self.axes):
            raise ValueError(f"Values of shape {self.values.shape} do not match the grid axes")
        if any(a.size < 3 for a in self.axes):
            raise ValueError("Every grid axis needs at least 3 nodes")
        if np.any(np.isnan(self.values)) or np.any(self.values == -np.inf):
            raise ValueError("Nodal values must be finite or +inf")
        if not np.any(np.isfinite(self.values)):
            raise DegenerateSetError("No finite nodal values")
        if check:
            self.check_convexity()

    @classmethod
    def from_function(
        cls,
        fn: Callable[[np.ndarray], np.ndarray],
        lower: Sequence[float],
        upper: Sequence[float],
        nodes: int = 129,
    ) -> "PLConvex":
        """Sample a vectorized function fn(points of shape (M, N)) on a box."""
        axes = [np.linspace(lo, hi, nodes) for lo, hi in zip(lower, upper)]
        grid = np.meshgrid(*axes, indexing="ij")
        points = np.column_stack([g.ravel() for g in grid])
        values = np.asarray(fn(points), dtype=float).reshape(grid[0].shape)
        return cls(axes, values)

    @classmethod
    def from_family(
        cls, u: ConvexFamily, domain: Domain, nodes: int = 129, pad: float = DEFAULT_PAD
    ) -> "PLConvex":
        """
        Sample a family on the padded bounding box of a domain.

        Singular minimum points that fall on a node keep their value; other
        non-admissible nodes are dropped.
        """
        lo, hi = domain.bounding_box()
        span = hi - lo
        lower, upper = lo - pad * span, hi + pad * span

        def evaluate(points: np.ndarray) -> np.ndarray:
            values = np.full(points.shape[0], np.inf)
            inside = u.contains(points)
            if np.any(inside):
                values[inside] = u.values(points[inside])
            for point in u.singular_points():
                hit = np.all(np.abs(points - point) <= DOMAIN_MARGIN, axis=1)
                if np.any(hit):
                    values[hit] = u.tangent(point)[0]
            dropped = int(np.sum(~np.isfinite(values)))
            if dropped:
                logger.debug(f"Dropped {dropped} non-admissible nodes of {u.tag}")
            return values

        return cls.from_function(evaluate, lower, upper, nodes)

    @property
    def shape(self) -> Tuple[int, ...]:
        return self.values.shape

    @property
    def spacing(self) -> np.ndarray:
        return np.array([a[1] - a[0] for a in self.axes])

    def nodes(self) -> np.ndarray:
        grid = np.meshgrid(*self.axes, indexing="ij")
        return np.column_stack([g.ravel() for g in grid])

    def convexity_defect(self) -> float:
        """Most negative second difference over all axes and diagonals (0 if none)."""
        worst = 0.0
        for d in _directions(self.dim):
            a, b, c = _triple(self.values, d)
            ok = np.isfinite(a) & np.isfinite(b) & np.isfinite(c)
            if np.any(ok):
                worst = min(worst, float(np.min((a - 2 * b + c)[ok])))
        return worst

    def check_convexity(self) -> None:
        finite = self.values[np.isfinite(self.values)]
        tol = 1e-9 * max(1.0, float(np.max(np.abs(finite))))
        defect = self.convexity_defect()
        if defect < -tol:
            raise ConvexityViolation(f"Nodal data is not convex: second difference {defect:.3e}")

    def slope_grid(self, count: Optional[int] = None, pad: float = DEFAULT_PAD) -> List[np.ndarray]:
        """
        Uniform slope axes covering the nodal difference quotients, padded.

        Args:
            count: Slopes per axis (defaults to 2n - 1)
            pad: Relative padding of each slope range
        """
        out = []
        for k, axis in enumerate(self.axes):
            q = np.diff(self.values, axis=k) / (axis[1] - axis[0])
            q = q[np.isfinite(q)]
            lo, hi = float(np.min(q)), float(np.max(q))
            span = max(hi - lo, 1e-12)
            m = 2 * axis.size - 1 if count is None else int(count)
            out.append(np.linspace(lo - pad * span, hi + pad * span, m))
        return out

    def contact_nodes(self, slopes: Sequence[np.ndarray], workers: int = 1) -> np.ndarray:
        """
        The maximizer of p . x - u(x) over the nodes for every slope p.

        Args:
            slopes: One slope axis per dimension
            workers: Worker pool size

        Returns:
            Node coordinates of shape (m_1, ..., m_N, N)
        """
        G = -self.values
        args: List[np.ndarray] = [np.empty(0, dtype=int)] * self.dim
        for k in range(self.dim - 1, -1, -1):
            G, args[k] = _legendre_step(G, k, slopes[k], self.axes[k], workers)
        grid = np.indices(G.shape)
        index: List[np.ndarray] = []
        for k in range(self.dim):
            index.append(args[k][tuple(index) + tuple(grid[k:])])
        return np.stack([self.axes[k][index[k]] for k in range(self.dim)], axis=-1)


def _legendre_step(G: np.ndarray, k: int, pk: np.ndarray, xk: np.ndarray, workers: int):
    """Replace node axis k of G by slope axis pk: max over x_k of p_k x_k + G."""
    moved = np.moveaxis(G, k, -1)
    lead = moved.shape[:-1]
    flat = moved.reshape(-1, moved.shape[-1])
    ramp = pk[:, None] * xk[None, :]

    def block(rows: np.ndarray):
        vals = rows[:, None, :] + ramp[None, :, :]
        idx = np.argmax(vals, axis=2)
        return np.take_along_axis(vals, idx[:, :, None], axis=2)[:, :, 0], idx

    parts = ordered_map(block, chunks(flat), workers)
    best = np.concatenate([b for b, _ in parts]).reshape(lead + (pk.size,))
    arg = np.concatenate([a for _, a in parts]).reshape(lead + (pk.size,))
    return np.moveaxis(best, -1, k), np.moveaxis(arg, -1, k)


def normal_image_area(
    p: PLConvex, domain: Domain, slopes: Optional[int] = None, workers: int = 1
) -> float:
    """
    N-volume of the subgradient image of the nodes of p lying in a domain.

    Args:
        p: Convex nodal data
        domain: Domain whose nodes are imaged
        slopes: Slope grid points per axis (defaults to 2n - 1)
        workers: Worker pool size

    Returns:
        Area (volume) of the discrete normal image
    """
    if p.dim != domain.dim:
        raise ValueError(f"Grid dimension {p.dim} does not match domain dimension {domain.dim}")
    axes = p.slope_grid(slopes)
    cell = float(np.prod([a[1] - a[0] for a in axes]))
    contact = p.contact_nodes(axes, workers).reshape(-1, p.dim)
    inside = domain.contains(contact)
    area = float(np.count_nonzero(inside)) * cell
    logger.debug(f"Normal image over {domain.tag} on {p.shape} nodes: {area:.6g}")
    return area


def ring_cell_volume(p: PLConvex, index: Sequence[int]) -> float:
    """
    Volume of the subdifferential of an interior node cut out by its 1-ring.

    The cell is {q : q . (x_j - x_0) <= u_j - u_0 for all grid neighbours j}.

    Raises:
        ValueError: If the node lies on the edge of the grid
    """
    index = tuple(int(i) for i in index)
    if any(i <= 0 or i >= n - 1 for i, n in zip(index, p.shape)):
        raise ValueError(f"Node {index} has no full 1-ring")
    h = p.spacing
    u0 = p.values[index]
    rows, rhs = [], []
    for offset in itertools.product((-1, 0, 1), repeat=p.dim):
        if not any(offset):
            continue
        neighbour = tuple(i + o for i, o in zip(index, offset))
        uj = p.values[neighbour]
        if np.isfinite(uj):
            rows.append(np.asarray(offset) * h)
            rhs.append(uj - u0)
    A = np.array(rows)
    b = np.array(rhs)
    # Chebyshev center of the cell, needed as the interior point of the intersection
    norms = np.linalg.norm(A, axis=1)
    cost = np.zeros(p.dim + 1)
    cost[-1] = -1.0
    res = linprog(
        cost,
        A_ub=np.column_stack([A, norms]),
        b_ub=b,
        bounds=[(None, None)] * p.dim + [(0, None)],
    )
    if not res.success:
        raise DegenerateSetError(f"Subdifferential of node {index} is unbounded: {res.message}")
    if res.x[-1] <= 1e-12:
        return 0.0
    halfspaces = np.column_stack([A, -b])
    cell = HalfspaceIntersection(halfspaces, res.x[:-1])
    return float(ConvexHull(cell.intersections).volume)


def normal_image_trend(
    u: ConvexFamily,
    domain: Domain,
    levels: Sequence[int] = DEFAULT_LEVELS,
    workers: int = 1,
) -> TrendTable:
    """Normal-image area of the grid interpolant of u over successive node counts."""
    values = []
    for nodes in levels:
        p = PLConvex.from_family(u, domain, nodes)
        values.append(normal_image_area(p, domain, workers=workers))
    logger.info(f"Normal image of {u.tag} on {domain.tag}: {values}")
    return TrendTable(label="normal_image_area", scales=[float(n) for n in levels], values=values)
