"""
The affine maximal type operator and its closed-form reductions.
"""

from .reductions import (
    product_full_residual,
    product_full_scale,
    product_halfspace_residual,
    product_halfspace_scale,
    tw_exponential_condition,
    tw_exponential_residual,
    warren_reduction,
    warren_residual,
    warren_scale,
)
from .residual import (
    divergence_residual,
    hessian_jets,
    jet_det,
    jet_inverse,
    max_normalized_residual,
    residual,
    residual_batch,
    w_value,
)

__all__ = [
    "divergence_residual",
    "hessian_jets",
    "jet_det",
    "jet_inverse",
    "max_normalized_residual",
    "product_full_residual",
    "product_full_scale",
    "product_halfspace_residual",
    "product_halfspace_scale",
    "residual",
    "residual_batch",
    "tw_exponential_condition",
    "tw_exponential_residual",
    "w_value",
    "warren_reduction",
    "warren_residual",
    "warren_scale",
]
