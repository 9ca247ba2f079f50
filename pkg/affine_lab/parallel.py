"""
Bounded, order-preserving worker pool.

Work is always split into fixed tasks that do not depend on the worker count,
and results come back in task order, so outputs are identical for any pool size.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence, TypeVar

import numpy as np

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

CHUNK_SIZE = 64


def ordered_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Apply ``fn`` to every item, returning results in input order.

    Args:
        fn: Pure function of one item
        items: Work items
        workers: Pool size; 1 runs inline

    Returns:
        List of results, one per item
    """
    if workers < 1:
        raise ValueError(f"Worker count must be positive, got {workers}")
    items = list(items)
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug(f"Dispatching {len(items)} tasks to {workers} workers")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def chunks(points: np.ndarray, size: int = CHUNK_SIZE) -> List[np.ndarray]:
    """Split a point array into fixed-size consecutive blocks."""
    if size < 1:
        raise ValueError(f"Chunk size must be positive, got {size}")
    return [points[i : i + size] for i in range(0, points.shape[0], size)]


def map_chunks(
    fn: Callable[[np.ndarray], Sequence[R]], points: np.ndarray, workers: int = 1
) -> List[R]:
    """Run ``fn`` on fixed-size blocks of points and flatten the per-point results."""
    out: List[R] = []
    for block in ordered_map(fn, chunks(points), workers):
        out.extend(block)
    return out
