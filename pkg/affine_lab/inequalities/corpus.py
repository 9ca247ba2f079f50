"""
Catalogues of convex families with prescribed boundary values, and the
runner that takes a check over a whole catalogue.
"""

import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

import numpy as np

from affine_lab.errors import LabError
from affine_lab.models import InequalityReport
from affine_lab.surfaces import (
    AffineImage,
    Ball,
    Cone,
    ConvexFamily,
    Domain,
    Ellipsoid,
    PowerRadial,
    Quadratic,
)
from .checks import CHECKS

logger = logging.getLogger(__name__)

CHECK_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "gradient": {"s": -0.75, "t": 0.0},
    "cone": {"t": 0.0, "s": -0.75},
    "lemma41": {"sigma": 0.5},
    "lemma43": {"sigma": 0.5},
}
NORMALIZED_CHECKS = ("lemma42", "lemma43")


@dataclass
class CorpusEntry:
    """A named family on a domain."""

    name: str
    family: ConvexFamily
    domain: Domain

    def __post_init__(self):
        """Validate entry."""
        if not self.name:
            raise ValueError("Corpus entry name cannot be empty")
        if self.family.dim != self.domain.dim:
            raise ValueError(
                f"Entry {self.name}: family dimension {self.family.dim} does not match "
                f"domain dimension {self.domain.dim}"
            )


def unimodular_shear(N: int) -> np.ndarray:
    """diag(2, 1/2, 1, ..., 1) with a shear in the leading block; determinant 1."""
    A = np.eye(N)
    A[0, 0], A[1, 1], A[0, 1] = 2.0, 0.5, 0.5
    return A


def standard_corpus(N: int = 2) -> List[CorpusEntry]:
    """Convex families vanishing on the boundary of their domain."""
    if N < 2:
        raise ValueError(f"Corpus needs dimension at least 2, got {N}")
    origin = np.zeros(N)
    ball = Ball(origin, 1.0)
    A = unimodular_shear(N)
    ellipsoid = Ellipsoid(origin, A)
    return [
        CorpusEntry("quadratic", Quadratic(2 * np.eye(N), c=-1.0), ball),
        CorpusEntry("power-1.5", PowerRadial(1.5, N), ball),
        CorpusEntry("power-3", PowerRadial(3.0, N), ball),
        CorpusEntry("cone", Cone(N), ball),
        CorpusEntry(
            "affine-quadratic", AffineImage(Quadratic(2 * np.eye(N), c=-1.0), A), ellipsoid
        ),
        CorpusEntry("affine-cone", AffineImage(Cone(N), A), ellipsoid),
    ]


def normalized_corpus(N: int = 2) -> List[CorpusEntry]:
    """Convex families with u = 1 on the boundary and u(0) = 0, Du(0) = 0."""
    if N < 2:
        raise ValueError(f"Corpus needs dimension at least 2, got {N}")
    origin = np.zeros(N)
    ball = Ball(origin, 1.0)
    A = unimodular_shear(N)
    return [
        CorpusEntry("quadratic", Quadratic(2 * np.eye(N)), ball),
        CorpusEntry("quartic", PowerRadial(4.0, N, constant=0.0), ball),
        CorpusEntry("cubic", PowerRadial(3.0, N, constant=0.0), ball),
        CorpusEntry(
            "affine-quadratic", AffineImage(Quadratic(2 * np.eye(N)), A), Ellipsoid(origin, A)
        ),
    ]


def corpus_for(check: str, N: int = 2) -> List[CorpusEntry]:
    """The catalogue a check runs on."""
    return normalized_corpus(N) if check in NORMALIZED_CHECKS else standard_corpus(N)


def run_corpus(
    check: str,
    entries: List[CorpusEntry],
    level: Optional[int] = None,
    workers: int = 1,
    **options,
) -> List[InequalityReport]:
    """
    Run one check over a catalogue, entry by entry.

    Args:
        check: Name in CHECKS
        entries: Catalogue
        level: First mass quadrature level
        workers: Worker pool size
        **options: Check arguments overriding CHECK_DEFAULTS

    Returns:
        One report per entry, in catalogue order

    Raises:
        ValueError: If the check is unknown
    """
    if check not in CHECKS:
        raise ValueError(f"Unknown check: {check}. Must be one of {sorted(CHECKS)}")
    kwargs = dict(CHECK_DEFAULTS.get(check, {}))
    kwargs.update(options)
    reports = []
    for entry in entries:
        try:
            report = CHECKS[check](
                entry.family, entry.domain, level=level, workers=workers, **kwargs
            )
        except LabError as e:
            logger.error(f"{check} failed on {entry.name}: {e}")
            raise
        report.family = entry.name
        reports.append(report)
        logger.info(f"{check} on {entry.name}: ratio {report.ratio:.6g}")
    return reports
