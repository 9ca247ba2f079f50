"""
Convex function families, one-variable curves and bounded domains.
"""

from .base import CONVEXITY_EPS, DOMAIN_MARGIN, ConvexFamily
from .curves import (
    HermiteCurve,
    PiecewiseCurve,
    PolynomialCurve,
    PowerCurve,
    RiccatiCurve,
    ScalarCurve,
    SumCurve,
    curve_from_dict,
)
from .domains import (
    Ball,
    Box,
    Domain,
    Ellipsoid,
    OrthantBox,
    SlabDomain,
    StarPolytope,
    domain_geometry,
    gauss_interval,
    sphere_area,
    sphere_rule,
)
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
    unit_ball_volume,
)
from .registry import domain_from_dict, dump_document, family_from_dict, load_document

__all__ = [
    "CONVEXITY_EPS",
    "DOMAIN_MARGIN",
    "AffineImage",
    "Ball",
    "Box",
    "Cone",
    "ConvexFamily",
    "CoordinatePower",
    "Domain",
    "Ellipsoid",
    "ExpPower",
    "HalfExp",
    "HermiteCurve",
    "OrthantBox",
    "PiecewiseCurve",
    "PolynomialCurve",
    "PowerCurve",
    "PowerRadial",
    "ProductFull",
    "ProductHalfSpace",
    "Quadratic",
    "RiccatiCurve",
    "ScalarCurve",
    "SlabDomain",
    "SlabSeparable",
    "StarPolytope",
    "SumCurve",
    "SumFamily",
    "TWSeparable",
    "WarrenSeparable",
    "curve_from_dict",
    "domain_from_dict",
    "domain_geometry",
    "dump_document",
    "family_from_dict",
    "gauss_interval",
    "load_document",
    "sphere_area",
    "sphere_rule",
    "unit_ball_volume",
]
