"""
Solution families of the affine maximal type equation and their parameter algebra.
"""

from .algebra import (
    VARIANTS,
    critical_dimension_bounds,
    full_target,
    general_F,
    solve_alpha_full,
    solve_alpha_halfspace,
    symmetric_F,
    symmetric_F_min,
    symmetric_F_min_closed_form,
    theta_of_alpha,
)
from .constructors import (
    TW_VARIANTS,
    build_solution,
    check_variant,
    make_cor91,
    make_riccati_family,
    make_thm81,
    make_thm82,
    make_thm91,
    make_tw_r9,
    nonquadratic_example,
    thm91_alphas,
)
from .ranges import THEOREM_NAMES, THEOREMS, ThetaRange, theorem_range
from .riccati import riccati_constants, riccati_phi, riccati_zeta, riccati_zeta_residual

__all__ = [
    "THEOREMS",
    "THEOREM_NAMES",
    "TW_VARIANTS",
    "VARIANTS",
    "ThetaRange",
    "build_solution",
    "check_variant",
    "critical_dimension_bounds",
    "full_target",
    "general_F",
    "make_cor91",
    "make_riccati_family",
    "make_thm81",
    "make_thm82",
    "make_thm91",
    "make_tw_r9",
    "nonquadratic_example",
    "riccati_constants",
    "riccati_phi",
    "riccati_zeta",
    "riccati_zeta_residual",
    "solve_alpha_full",
    "solve_alpha_halfspace",
    "symmetric_F",
    "symmetric_F_min",
    "symmetric_F_min_closed_form",
    "theorem_range",
    "theta_of_alpha",
    "thm91_alphas",
]
