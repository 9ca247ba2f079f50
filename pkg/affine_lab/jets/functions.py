"""
Elementary functions that accept jets, numpy arrays or plain floats.

Family formulas are written once against these helpers; the same expression
then yields values on point clouds and full jets at seeded points.
"""

from typing import Union

import numpy as np

from affine_lab.errors import JetDomainError
from .jet import Jet, jet_unary

Field = Union[Jet, np.ndarray, float]


def exp(x: Field) -> Field:
    if isinstance(x, Jet):
        return jet_unary(x, "exp")
    return np.exp(x)


def log(x: Field) -> Field:
    if isinstance(x, Jet):
        return jet_unary(x, "log")
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0):
        raise JetDomainError(f"log requires a positive argument, got {np.min(arr)}")
    return np.log(x)


def power(x: Field, p: float) -> Field:
    """x**p with integer exponents handled exactly and domain checks otherwise."""
    if isinstance(x, Jet):
        return x ** p
    arr = np.asarray(x, dtype=float)
    integral = float(p).is_integer()
    if not integral and np.any(arr < 0):
        raise JetDomainError(f"power({p}) requires a nonnegative argument, got {np.min(arr)}")
    if p < 0 and np.any(arr == 0):
        raise JetDomainError(f"power({p}) of zero")
    return np.power(x, float(p))


def sqrt(x: Field) -> Field:
    return power(x, 0.5)


def square_norm(coords) -> Field:
    """Sum of squares of a coordinate list."""
    total = coords[0] * coords[0]
    for c in coords[1:]:
        total = total + c * c
    return total
