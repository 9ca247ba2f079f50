"""
Family and domain documents.

A family document is a mapping with a ``family`` tag, the dimension and the
parameter record written by ``ConvexFamily.to_dict``; domains likewise carry
a ``domain`` tag. Documents round-trip through JSON or YAML.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

import yaml

from .base import ConvexFamily
from .curves import curve_from_dict
from .domains import Ball, Box, Domain, Ellipsoid, OrthantBox, SlabDomain, StarPolytope
from .families import (
    AffineImage,
    Cone,
    CoordinatePower,
    ExpPower,
    HalfExp,
    PowerRadial,
    ProductFull,
    ProductHalfSpace,
    Quadratic,
    SlabSeparable,
    SumFamily,
    TWSeparable,
    WarrenSeparable,
)

logger = logging.getLogger(__name__)

FAMILY_TAGS = (
    "quadratic",
    "warren",
    "trudinger-wang",
    "exp-power",
    "half-exp",
    "product-halfspace",
    "product-full",
    "power-radial",
    "cone",
    "slab",
    "coordinate-power",
    "sum",
    "affine-image",
)


def family_from_dict(doc: Dict[str, Any]) -> ConvexFamily:
    """
    Build a family from its document.

    Args:
        doc: Mapping with a ``family`` tag and the family's parameters

    Returns:
        ConvexFamily instance

    Raises:
        ValueError: If the tag is unknown or a parameter is missing
    """
    tag = doc.get("family")
    dim = doc.get("dim")
    try:
        if tag == "quadratic":
            return Quadratic(doc["Q"], doc.get("b"), doc.get("c", 0.0))
        if tag == "warren":
            eta, phi = curve_from_dict(doc["eta"]), curve_from_dict(doc["phi"])
            return WarrenSeparable(eta, phi, doc["n"])
        if tag == "trudinger-wang":
            return TWSeparable(curve_from_dict(doc["phi"]), curve_from_dict(doc["eta"]), doc["n"])
        if tag == "exp-power":
            return ExpPower(doc["alpha"], doc["n"])
        if tag == "half-exp":
            return HalfExp(doc["A"], doc.get("B"), doc.get("C", 0.0))
        if tag == "product-halfspace":
            return ProductHalfSpace(doc["alpha"])
        if tag == "product-full":
            return ProductFull(doc["alpha"])
        if tag == "power-radial":
            return PowerRadial(doc["beta"], dim, doc.get("constant", -1.0))
        if tag == "cone":
            return Cone(dim, doc.get("slope", 1.0), doc.get("constant", -1.0), doc.get("apex"))
        if tag == "slab":
            return SlabSeparable(curve_from_dict(doc["zeta"]), curve_from_dict(doc["eta"]), dim)
        if tag == "coordinate-power":
            return CoordinatePower(dim, doc["axis"], doc["exponent"], doc.get("coef", 1.0))
        if tag == "sum":
            return SumFamily([family_from_dict(term) for term in doc["terms"]])
        if tag == "affine-image":
            return AffineImage(
                family_from_dict(doc["base"]),
                doc["matrix"],
                doc.get("shift"),
                doc.get("linear"),
                doc.get("constant", 0.0),
            )
    except KeyError as e:
        raise ValueError(f"Family document for '{tag}' is missing parameter {e}") from e
    raise ValueError(f"Unknown family: {tag}. Must be one of {FAMILY_TAGS}")


def domain_from_dict(doc: Dict[str, Any]) -> Domain:
    """Build a domain from its document."""
    tag = doc.get("domain")
    level = doc.get("level", 0)
    try:
        if tag == "ball":
            return Ball(doc["center"], doc["radius"], level, doc.get("grading", 1.0))
        if tag == "box":
            return Box(doc["lower"], doc["upper"], level)
        if tag == "orthant-box":
            return OrthantBox(doc["lower"], doc["upper"], level)
        if tag == "ellipsoid":
            return Ellipsoid(doc["center"], doc["matrix"], level)
        if tag == "star-polytope":
            return StarPolytope(
                doc["center"], doc["directions"], doc["radii"], doc["weights"], level
            )
        if tag == "slab":
            return SlabDomain(
                curve_from_dict(doc["zeta"]),
                curve_from_dict(doc["eta"]),
                doc["width"],
                doc["dim"],
                doc["breakpoint"],
                level,
            )
    except KeyError as e:
        raise ValueError(f"Domain document for '{tag}' is missing parameter {e}") from e
    raise ValueError(f"Unknown domain: {tag}")


def load_document(path: Union[str, Path]) -> Dict[str, Any]:
    """
    Read a family or domain document from a JSON or YAML file.

    Raises:
        FileNotFoundError: If the file doesn't exist
        ValueError: If the file is empty
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Document not found: {path}")
    logger.info(f"Loading document from {path}")
    with open(path, "r") as f:
        data = yaml.safe_load(f)
    if not data:
        raise ValueError(f"Document is empty: {path}")
    return data


def dump_document(doc: Dict[str, Any]) -> str:
    """Canonical JSON text of a document."""
    return json.dumps(doc, sort_keys=True, indent=2)
