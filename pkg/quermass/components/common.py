"""Common classes, shared among different components."""


class InvalidBodyException(Exception):
    """Raised when a convex body cannot be constructed.

    This happens when the input does not describe a member of 𝒦ⁿ_o: the vertices of a
    polytope are not affinely full-dimensional, a shape matrix is not positive definite,
    or the origin does not lie strictly inside the body.
    """


class DimensionMismatchException(Exception):
    """Raised when two bodies, or a body and a direction or subspace, live in different dimensions."""


class UnboundedIntersectionException(Exception):
    """Raised when an intersection of halfspaces is unbounded.

    The sampled directions do not surround the origin, so the outer polytope
    ``∩ᵢ {x : ⟨x, uᵢ⟩ <= h(uᵢ)}`` has no vertex representation. Use more directions.
    """


class UnsupportedBodyException(Exception):
    """Raised when an operation needs a body kind it was not given.

    Mixed volumes need a polytope first argument, for example. Oracle bodies must be
    replaced by an outer polytope first.
    """


class InvalidOrliczFunctionException(Exception):
    """Raised when a function fails the sampled checks for membership in the class 𝒞.

    Members of 𝒞 are increasing convex functions ``φ: [0, ∞) -> [0, ∞)`` with
    ``φ(0) = 0`` and ``φ(1) = 1``.
    """
