"""
Exception hierarchy for Affine Lab.

Validation failures subclass ValueError so callers can keep catching ValueError;
numerical breakdowns that are not caused by bad input subclass RuntimeError.
"""


class LabError(Exception):
    """Base class for all Affine Lab errors."""


class JetDomainError(LabError, ValueError):
    """A jet operation was applied outside the domain of the underlying function."""


class DomainViolation(LabError, ValueError):
    """A point (or a stencil around it) lies outside a family's admissible domain."""


class DegenerateHessianError(LabError, ValueError):
    """The Hessian is not positive definite where strict convexity is required."""


class ParameterRangeError(LabError, ValueError):
    """A theorem or construction precondition on the parameters is violated."""


class ConvexityViolation(LabError, ValueError):
    """Nodal data or a constructed function fails a convexity check."""


class BoundaryConditionError(LabError, ValueError):
    """A function does not satisfy the boundary normalization a check requires."""


class UnboundedSublevelError(LabError, ValueError):
    """A sub-level set does not close up inside the family domain."""


class DegenerateSetError(LabError, ValueError):
    """A convex set is flat or empty where a body with interior is required."""


class FlatDirectionError(LabError, ValueError):
    """The normalized function vanishes along the sampled direction."""


class NonIntegrableError(LabError, RuntimeError):
    """A quadrature sequence keeps growing under refinement."""


class ConstructionError(LabError, RuntimeError):
    """A numerical construction failed one of its postconditions."""


class BracketError(LabError, RuntimeError):
    """A root could not be bracketed."""
