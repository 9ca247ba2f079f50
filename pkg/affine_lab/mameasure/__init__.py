"""
Monge-Ampere measure: mass quadrature, normal images, sections and their normalization.
"""

from .john import john_normalize, khachiyan
from .normal_image import PLConvex, normal_image_area, normal_image_trend, ring_cell_volume
from .quadrature import integrate_det, ma_mass
from .sublevel import (
    SubLevelSet,
    average_density,
    doubling_ratio,
    halving_exponent,
    halving_ratio,
    level_set,
    minimum_point,
    sublevel,
)

__all__ = [
    "PLConvex",
    "SubLevelSet",
    "average_density",
    "doubling_ratio",
    "halving_exponent",
    "halving_ratio",
    "integrate_det",
    "john_normalize",
    "khachiyan",
    "level_set",
    "ma_mass",
    "minimum_point",
    "normal_image_area",
    "normal_image_trend",
    "ring_cell_volume",
    "sublevel",
]
