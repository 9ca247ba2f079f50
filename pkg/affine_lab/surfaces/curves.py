"""
One-variable curves with derivatives through order four.

Curves feed the separable families: eta and phi of the Warren and
Trudinger-Wang ansatz, zeta and eta of the slab construction. Each curve
returns its derivative stack f, f', f'', f''', f'''' at arrays of abscissae
and composes with jets through that stack.
"""

import logging
import math
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.integrate import quad
from scipy.interpolate import BPoly

from affine_lab.errors import DomainViolation
from affine_lab.jets import MAX_ORDER, Jet, compose, seed_variable

logger = logging.getLogger(__name__)

DERIVATIVES = MAX_ORDER + 1


class ScalarCurve(ABC):
    """A scalar function of one variable on an open interval."""

    domain: Tuple[float, float] = (-math.inf, math.inf)

    @abstractmethod
    def derivatives(self, t: np.ndarray) -> List[np.ndarray]:
        """
        Evaluate f and its first four derivatives.

        Args:
            t: Abscissae inside the domain

        Returns:
            List [f, f', f'', f''', f''''] of arrays shaped like t
        """
        pass

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """Serializable parameter record."""
        pass

    def value(self, t):
        return self.derivatives(np.asarray(t, dtype=float))[0]

    def contains(self, t, margin: float = 0.0) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        lo, hi = self.domain
        return (t > lo + margin) & (t < hi - margin)

    def check(self, t) -> None:
        if not np.all(self.contains(t)):
            bad = np.asarray(t, dtype=float)[~self.contains(t)]
            raise DomainViolation(
                f"{type(self).__name__} evaluated at {bad.ravel()[:3]} outside domain {self.domain}"
            )

    def __call__(self, t):
        if isinstance(t, Jet):
            t0 = np.asarray(t.coeffs[0], dtype=float)
            self.check(t0)
            return compose(t, self.derivatives(t0))
        self.check(t)
        out = self.value(t)
        return float(out) if np.ndim(out) == 0 else out


def _power_stack(t: np.ndarray, coef: float, p: float) -> List[np.ndarray]:
    integral = float(p).is_integer() and p >= 0
    out = []
    falling = 1.0
    for k in range(DERIVATIVES):
        if integral and k > p:
            out.append(np.zeros_like(t))
        else:
            out.append(coef * falling * np.power(t, p - k))
        falling *= p - k
    return out


class PowerCurve(ScalarCurve):
    """c * t**p, on t > 0 unless p is a nonnegative integer."""

    def __init__(self, coef: float, exponent: float):
        self.coef = float(coef)
        self.exponent = float(exponent)
        if not (self.exponent.is_integer() and self.exponent >= 0):
            self.domain = (0.0, math.inf)

    def derivatives(self, t):
        return _power_stack(np.asarray(t, dtype=float), self.coef, self.exponent)

    def to_dict(self):
        return {"kind": "power", "coef": self.coef, "exponent": self.exponent}

    def __repr__(self):
        return f"PowerCurve({self.coef} * t^{self.exponent})"


class PolynomialCurve(ScalarCurve):
    """c0 + c1 t + c2 t^2 + ... (coefficients in increasing degree)."""

    def __init__(self, coeffs: Sequence[float]):
        if len(coeffs) == 0:
            raise ValueError("Polynomial needs at least one coefficient")
        self.coeffs = np.asarray(coeffs, dtype=float)

    def derivatives(self, t):
        t = np.asarray(t, dtype=float)
        out, c = [], self.coeffs
        for _ in range(DERIVATIVES):
            out.append(P.polyval(t, c) + np.zeros_like(t))
            c = P.polyder(c) if c.size > 1 else np.zeros(1)
        return out

    def to_dict(self):
        return {"kind": "polynomial", "coeffs": self.coeffs.tolist()}

    def __repr__(self):
        return f"PolynomialCurve({self.coeffs.tolist()})"


class SumCurve(ScalarCurve):
    """Pointwise sum of curves on the intersection of their domains."""

    def __init__(self, terms: Sequence[ScalarCurve]):
        if not terms:
            raise ValueError("SumCurve needs at least one term")
        self.terms = list(terms)
        self.domain = (
            max(term.domain[0] for term in self.terms),
            min(term.domain[1] for term in self.terms),
        )

    def derivatives(self, t):
        stacks = [term.derivatives(t) for term in self.terms]
        return [sum(stack[k] for stack in stacks) for k in range(DERIVATIVES)]

    def to_dict(self):
        return {"kind": "sum", "terms": [term.to_dict() for term in self.terms]}

    def __repr__(self):
        return " + ".join(repr(term) for term in self.terms)


class PiecewiseCurve(ScalarCurve):
    """``left`` up to and including ``breakpoint``, ``right`` beyond it."""

    def __init__(self, left: ScalarCurve, right: ScalarCurve, breakpoint: float):
        self.left = left
        self.right = right
        self.breakpoint = float(breakpoint)
        self.domain = (left.domain[0], right.domain[1])

    def derivatives(self, t):
        t = np.asarray(t, dtype=float)
        below = t <= self.breakpoint
        # each piece is evaluated only inside its own domain, the breakpoint stands in elsewhere
        left = self.left.derivatives(np.where(below, t, self.breakpoint))
        right = self.right.derivatives(np.where(below, self.breakpoint, t))
        return [np.where(below, lk, rk) for lk, rk in zip(left, right)]

    def to_dict(self):
        return {
            "kind": "piecewise",
            "breakpoint": self.breakpoint,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }


class HermiteCurve(ScalarCurve):
    """
    Piecewise polynomial matching f, f', ..., f'''' at every node.

    Used for ODE solutions: the solver provides the state at the nodes and
    the higher derivatives come from differentiating the ODE itself.
    """

    def __init__(self, nodes: Sequence[float], stack: np.ndarray):
        nodes = np.asarray(nodes, dtype=float)
        stack = np.asarray(stack, dtype=float)
        if stack.shape != (nodes.size, DERIVATIVES):
            raise ValueError(
                f"Hermite data must have shape ({nodes.size}, {DERIVATIVES}), got {stack.shape}"
            )
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("Hermite nodes must be strictly increasing")
        self.nodes = nodes
        self.stack = stack
        self.domain = (float(nodes[0]), float(nodes[-1]))
        self._poly = BPoly.from_derivatives(nodes, stack)
        self._derivs = [self._poly] + [self._poly.derivative(k) for k in range(1, DERIVATIVES)]

    def contains(self, t, margin: float = 0.0):
        t = np.asarray(t, dtype=float)
        lo, hi = self.domain
        return (t >= lo + margin) & (t <= hi - margin)

    def derivatives(self, t):
        t = np.asarray(t, dtype=float)
        return [np.asarray(d(t)) for d in self._derivs]

    def to_dict(self):
        return {"kind": "hermite", "nodes": self.nodes.tolist(), "stack": self.stack.tolist()}


class RiccatiCurve(ScalarCurve):
    """
    c4 * int_a^t (t - r) r^n (r - 1/c3)^(-1/theta) dr + c5 t + c6 for c3 < 0.

    phi'' and its derivatives come from jets of the integrand; phi and phi'
    by adaptive quadrature from the lower limit a = 1/(2 c3).
    """

    domain = (0.0, math.inf)

    def __init__(self, n: int, theta: float, c3: float, c4: float, c5: float, c6: float):
        if not (c3 < 0 and math.isfinite(c3)):
            raise ValueError(f"Finite branch needs a negative c3, got {c3}")
        if theta <= 0:
            raise ValueError(f"theta must be positive, got {theta}")
        self.n = int(n)
        self.theta = float(theta)
        self.c3, self.c4, self.c5, self.c6 = float(c3), float(c4), float(c5), float(c6)
        self.pole = 1.0 / self.c3
        self.lower = 0.5 / self.c3

    def integrand(self, r):
        return np.power(r, self.n) * np.power(r - self.pole, -1.0 / self.theta)

    def _quad(self, fn, t: float) -> float:
        value, _ = quad(fn, self.lower, t, epsrel=1e-10, epsabs=0.0, limit=200)
        return value

    def derivatives(self, t):
        t = np.asarray(t, dtype=float)
        jet = seed_variable(0, t, 1, order=2)
        g = jet ** self.n * (jet - self.pole) ** (-1.0 / self.theta)
        flat = t.ravel()
        first = np.array([self._quad(self.integrand, s) for s in flat]).reshape(t.shape)
        zeroth = np.array(
            [self._quad(lambda r, s=s: (s - r) * self.integrand(r), s) for s in flat]
        ).reshape(t.shape)
        return [
            self.c4 * zeroth + self.c5 * t + self.c6,
            self.c4 * first + self.c5,
            self.c4 * np.asarray(g.derivative([0])) + np.zeros_like(t),
            self.c4 * np.asarray(g.derivative([1])) + np.zeros_like(t),
            self.c4 * np.asarray(g.derivative([2])) + np.zeros_like(t),
        ]

    def to_dict(self):
        return {
            "kind": "riccati", "n": self.n, "theta": self.theta,
            "c3": self.c3, "c4": self.c4, "c5": self.c5, "c6": self.c6,
        }


def curve_from_dict(doc: Dict[str, Any]) -> ScalarCurve:
    """Rebuild a curve from its parameter record."""
    kind = doc.get("kind")
    if kind == "power":
        return PowerCurve(doc["coef"], doc["exponent"])
    if kind == "polynomial":
        return PolynomialCurve(doc["coeffs"])
    if kind == "sum":
        return SumCurve([curve_from_dict(term) for term in doc["terms"]])
    if kind == "piecewise":
        return PiecewiseCurve(
            curve_from_dict(doc["left"]), curve_from_dict(doc["right"]), doc["breakpoint"]
        )
    if kind == "hermite":
        return HermiteCurve(doc["nodes"], np.asarray(doc["stack"]))
    if kind == "riccati":
        return RiccatiCurve(
            doc["n"], doc["theta"], doc["c3"], doc["c4"], doc.get("c5", 0.0), doc.get("c6", 0.0)
        )
    raise ValueError(f"Unknown curve kind: {kind}")
