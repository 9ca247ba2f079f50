"""
Truncated Taylor jets: the differentiation engine behind every residual.
"""

from .jet import (
    MAX_ORDER,
    Jet,
    JetLayout,
    compose,
    extract,
    get_layout,
    jet_arith,
    jet_unary,
    seed_point,
    seed_variable,
)
from .check import fd_crosscheck
from . import functions

__all__ = [
    "MAX_ORDER",
    "Jet",
    "JetLayout",
    "compose",
    "extract",
    "fd_crosscheck",
    "functions",
    "get_layout",
    "jet_arith",
    "jet_unary",
    "seed_point",
    "seed_variable",
]
