"""
Truncated multivariate Taylor jets.

A jet of order K in ``dim`` variables stores the Taylor coefficients
c_alpha = D^alpha f / alpha! for every multi-index alpha with |alpha| <= K.
Coefficients are kept densely in a fixed multi-index order; an optional
trailing batch shape lets one jet carry the expansions at many points at once.
"""

import itertools
import logging
import math
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np

from affine_lab.errors import JetDomainError

logger = logging.getLogger(__name__)

MAX_ORDER = 4

ORDER_NAMES = {"value": 0, "gradient": 1, "hessian": 2, "third": 3, "fourth": 4}

Scalar = Union[float, int, np.ndarray]


class JetLayout:
    """Multi-index bookkeeping shared by every jet with the same (dim, order)."""

    def __init__(self, dim: int, order: int):
        if dim < 1:
            raise ValueError(f"Jet dimension must be positive, got {dim}")
        if not 0 <= order <= MAX_ORDER:
            raise ValueError(f"Jet order must lie in [0, {MAX_ORDER}], got {order}")

        self.dim = dim
        self.order = order

        indices: List[Tuple[int, ...]] = []
        for degree in range(order + 1):
            for combo in itertools.combinations_with_replacement(range(dim), degree):
                counts = [0] * dim
                for var in combo:
                    counts[var] += 1
                indices.append(tuple(counts))

        self.indices = np.array(indices, dtype=int).reshape(len(indices), dim)
        self.index_of: Dict[Tuple[int, ...], int] = {alpha: k for k, alpha in enumerate(indices)}
        self.degrees = self.indices.sum(axis=1)
        self.factorials = np.array(
            [math.prod(math.factorial(a) for a in alpha) for alpha in indices], dtype=float
        )
        self.size = len(indices)
        # count of multi-indices with degree <= d, for d = 0..order
        self.count_upto = [int(np.sum(self.degrees <= d)) for d in range(order + 1)]

        self._build_product_table(indices)
        self._tensor_maps: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}
        self._derivative_maps: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}

    def _build_product_table(self, indices: List[Tuple[int, ...]]) -> None:
        left, right, target = [], [], []
        for p, alpha in enumerate(indices):
            room = self.order - int(self.degrees[p])
            for q in range(self.count_upto[room]):
                beta = indices[q]
                left.append(p)
                right.append(q)
                target.append(self.index_of[tuple(a + b for a, b in zip(alpha, beta))])

        order = np.argsort(np.array(target), kind="stable")
        self.mul_left = np.array(left, dtype=int)[order]
        self.mul_right = np.array(right, dtype=int)[order]
        sorted_target = np.array(target, dtype=int)[order]
        # every target owns at least the pair (alpha, 0), so reduceat sees all of them
        self.mul_starts = np.flatnonzero(np.r_[True, sorted_target[1:] != sorted_target[:-1]])

    def tensor_map(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        """Coefficient positions and factorial weights for the full order-k tensor."""
        if k not in self._tensor_maps:
            positions, weights = [], []
            for combo in itertools.product(range(self.dim), repeat=k):
                counts = [0] * self.dim
                for var in combo:
                    counts[var] += 1
                pos = self.index_of[tuple(counts)]
                positions.append(pos)
                weights.append(self.factorials[pos])
            self._tensor_maps[k] = (np.array(positions, dtype=int), np.array(weights))
        return self._tensor_maps[k]

    def derivative_map(self, var: int) -> Tuple[np.ndarray, np.ndarray]:
        """Source positions and factors for d/dx_var, landing in the order-1 lower layout."""
        if var not in self._derivative_maps:
            lower = get_layout(self.dim, self.order - 1)
            sources, factors = [], []
            for beta in lower.indices:
                alpha = list(beta)
                alpha[var] += 1
                sources.append(self.index_of[tuple(alpha)])
                factors.append(float(beta[var] + 1))
            self._derivative_maps[var] = (np.array(sources, dtype=int), np.array(factors))
        return self._derivative_maps[var]


@lru_cache(maxsize=None)
def get_layout(dim: int, order: int) -> JetLayout:
    """Return the shared layout for jets of the given dimension and order."""
    logger.debug(f"Building jet layout dim={dim} order={order}")
    return JetLayout(dim, order)


def _scale(coeffs: np.ndarray, values: Scalar) -> np.ndarray:
    """Multiply every coefficient by a scalar or per-point value."""
    arr = np.asarray(values, dtype=float)
    extra = arr.ndim - (coeffs.ndim - 1)
    if extra > 0:
        coeffs = coeffs.reshape(coeffs.shape + (1,) * extra)
    return coeffs * arr[np.newaxis, ...]


class Jet:
    """A truncated Taylor expansion of a scalar field."""

    __slots__ = ("layout", "coeffs")
    __array_ufunc__ = None

    def __init__(self, layout: JetLayout, coeffs: np.ndarray):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape[0] != layout.size:
            raise ValueError(
                f"Expected {layout.size} coefficients for dim={layout.dim} order={layout.order}, "
                f"got {coeffs.shape[0]}"
            )
        self.layout = layout
        self.coeffs = coeffs

    @classmethod
    def constant(cls, value: Scalar, dim: int, order: int = MAX_ORDER) -> "Jet":
        layout = get_layout(dim, order)
        value = np.asarray(value, dtype=float)
        coeffs = np.zeros((layout.size,) + value.shape)
        coeffs[0] = value
        return cls(layout, coeffs)

    @property
    def dim(self) -> int:
        return self.layout.dim

    @property
    def order(self) -> int:
        return self.layout.order

    @property
    def batch_shape(self) -> Tuple[int, ...]:
        return self.coeffs.shape[1:]

    @property
    def value(self) -> Scalar:
        v = self.coeffs[0]
        return float(v) if v.ndim == 0 else v

    def __repr__(self) -> str:
        return f"Jet(dim={self.dim}, order={self.order}, batch={self.batch_shape})"

    # -- structural operations -------------------------------------------------

    def truncate(self, order: int) -> "Jet":
        """Drop all coefficients above the given total degree."""
        if order > self.order:
            raise ValueError(f"Cannot raise jet order from {self.order} to {order}")
        if order == self.order:
            return self
        layout = get_layout(self.dim, order)
        return Jet(layout, self.coeffs[: layout.size])

    def differentiate(self, var: int) -> "Jet":
        """Partial derivative in one variable; the result has one order less."""
        if not 0 <= var < self.dim:
            raise ValueError(f"Variable index {var} out of range for dim {self.dim}")
        if self.order == 0:
            raise ValueError("Cannot differentiate an order-0 jet")
        sources, factors = self.layout.derivative_map(var)
        lower = get_layout(self.dim, self.order - 1)
        factors = factors.reshape((-1,) + (1,) * len(self.batch_shape))
        return Jet(lower, self.coeffs[sources] * factors)

    def derivative(self, alpha: Sequence[int]) -> Scalar:
        """The partial derivative D^alpha f for a multi-index given as counts."""
        key = tuple(int(a) for a in alpha)
        if len(key) != self.dim or sum(key) > self.order:
            raise ValueError(f"Multi-index {key} not available in order-{self.order} jet")
        pos = self.layout.index_of[key]
        out = self.coeffs[pos] * self.layout.factorials[pos]
        return float(out) if np.ndim(out) == 0 else out

    # -- arithmetic ------------------------------------------------------------

    def _coerce(self, other: "Jet") -> Tuple[JetLayout, np.ndarray, np.ndarray]:
        if other.dim != self.dim:
            raise ValueError(f"Jet dimension mismatch: {self.dim} vs {other.dim}")
        order = min(self.order, other.order)
        ca = self.truncate(order).coeffs
        cb = other.truncate(order).coeffs
        ndim = max(ca.ndim, cb.ndim)
        ca = ca.reshape(ca.shape + (1,) * (ndim - ca.ndim))
        cb = cb.reshape(cb.shape + (1,) * (ndim - cb.ndim))
        return get_layout(self.dim, order), ca, cb

    def __add__(self, other):
        if isinstance(other, Jet):
            layout, ca, cb = self._coerce(other)
            return Jet(layout, ca + cb)
        other = np.asarray(other, dtype=float)
        shape = np.broadcast_shapes(self.batch_shape, other.shape)
        coeffs = np.broadcast_to(self.coeffs, (self.layout.size,) + shape).copy()
        coeffs[0] += other
        return Jet(self.layout, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.layout, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Jet):
            lay, ca, cb = self._coerce(other)
            prod = ca[lay.mul_left] * cb[lay.mul_right]
            return Jet(lay, np.add.reduceat(prod, lay.mul_starts, axis=0))
        return Jet(self.layout, _scale(self.coeffs, other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * jet_unary(other, "recip")
        other_arr = np.asarray(other, dtype=float)
        if np.any(other_arr == 0.0):
            raise JetDomainError("Division of a jet by zero")
        return self * (1.0 / other_arr)

    def __rtruediv__(self, other):
        return jet_unary(self, "recip") * other

    def __pow__(self, p):
        p_float = float(p)
        if p_float.is_integer() and p_float >= 0:
            return _integer_power(self, int(p_float))
        return jet_unary(self, "pow", p_float)


def _integer_power(a: Jet, n: int) -> Jet:
    result = Jet.constant(np.ones(a.batch_shape), a.dim, a.order)
    base = a
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def compose(a: Jet, derivs: Sequence[Scalar]) -> Jet:
    """
    Compose a one-variable function with a jet.

    Args:
        a: Inner jet
        derivs: f(a0), f'(a0), ..., f^(K)(a0) at the jet's value a0, K >= a.order

    Returns:
        Jet of f(a), exact through the jet's order
    """
    if len(derivs) < a.order + 1:
        raise ValueError(f"Need {a.order + 1} derivatives to compose, got {len(derivs)}")
    nilpotent = a - a.coeffs[0]
    k = a.order
    result = Jet.constant(np.asarray(derivs[k], dtype=float) / math.factorial(k), a.dim, a.order)
    for j in range(k - 1, -1, -1):
        result = result * nilpotent + np.asarray(derivs[j], dtype=float) / math.factorial(j)
    return result


def _falling(p: float, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= p - j
    return out


def _unary_derivatives(name: str, x0: np.ndarray, order: int, p: float = 0.0) -> List[np.ndarray]:
    if name == "exp":
        e = np.exp(x0)
        return [e] * (order + 1)
    if name == "log":
        if np.any(x0 <= 0):
            raise JetDomainError(f"log requires a positive value, got {np.min(x0)}")
        out = [np.log(x0)]
        for k in range(1, order + 1):
            out.append((-1.0) ** (k - 1) * math.factorial(k - 1) * x0 ** (-float(k)))
        return out
    if name in ("pow", "sqrt", "recip"):
        if name == "sqrt":
            p = 0.5
        elif name == "recip":
            p = -1.0
        integral = float(p).is_integer()
        if not integral and np.any(x0 <= 0):
            raise JetDomainError(f"pow({p}) requires a positive value, got {np.min(x0)}")
        if integral and p < 0 and np.any(x0 == 0):
            raise JetDomainError(f"pow({p}) of a zero value (division by zero)")
        return [_falling(p, k) * np.power(x0, p - k) for k in range(order + 1)]
    raise ValueError(f"Unknown unary jet function: {name}")


def jet_unary(a: Jet, f: str, p: float = 0.0) -> Jet:
    """
    Apply exp, log, pow(p), sqrt or recip to a jet.

    Args:
        a: Argument jet
        f: Function name
        p: Exponent for ``pow``

    Returns:
        Truncated Taylor composition, exact to the jet's order

    Raises:
        JetDomainError: If the leading value is outside the function's domain
    """
    x0 = np.asarray(a.coeffs[0], dtype=float)
    return compose(a, _unary_derivatives(f, x0, a.order, p))


def jet_arith(a: Union[Jet, Scalar], b: Union[Jet, Scalar], op: str) -> Jet:
    """Binary jet arithmetic by name: add, sub, mul or div."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"Unknown jet operation: {op}")


def seed_variable(i: int, value: Scalar, dim: int, order: int = MAX_ORDER) -> Jet:
    """
    Jet of the coordinate function x_i at a point.

    Args:
        i: Variable index, 0 <= i < dim
        value: Coordinate value (scalar, or array for a batch of points)
        dim: Number of variables
        order: Truncation order

    Returns:
        Jet with the given value and unit coefficient on e_i
    """
    if not 0 <= i < dim:
        raise ValueError(f"Variable index {i} out of range for dim {dim}")
    jet = Jet.constant(value, dim, order)
    if order >= 1:
        jet.coeffs[1 + i] = 1.0
    return jet


def seed_point(x: Union[Sequence[float], np.ndarray], order: int = MAX_ORDER) -> List[Jet]:
    """Seed every coordinate of a point, or of a (..., dim) batch of points."""
    x = np.asarray(x, dtype=float)
    dim = x.shape[-1]
    return [seed_variable(i, x[..., i], dim, order) for i in range(dim)]


def extract(j: Jet, order: Union[str, int]) -> Union[float, np.ndarray]:
    """
    Recover a derivative tensor from a jet.

    Args:
        j: The jet
        order: One of value, gradient, hessian, third, fourth (or 0..4)

    Returns:
        Tensor of shape batch_shape + (dim,) * k
    """
    k = ORDER_NAMES[order] if isinstance(order, str) else int(order)
    if k > j.order:
        raise ValueError(f"Order-{k} derivatives are not available in an order-{j.order} jet")
    if k == 0:
        return j.value
    positions, weights = j.layout.tensor_map(k)
    batch = j.batch_shape
    flat = j.coeffs[positions] * weights.reshape((-1,) + (1,) * len(batch))
    tensor = flat.reshape((j.dim,) * k + batch)
    return np.moveaxis(tensor, list(range(k)), list(range(len(batch), len(batch) + k)))
