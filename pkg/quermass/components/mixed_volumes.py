"""Surface area measures, volumes and mixed volumes.

Mixed volumes are evaluated as atom sums over the surface area measure of a polytope
first argument:

* ``V₁(K, L) = (1/n) Σ h_L(uᵢ) wᵢ``
* ``V_p(K, L) = (1/n) Σ h_L(uᵢ)^p h_K(uᵢ)^{1-p} wᵢ``
* ``V_φ(K, L) = (1/n) Σ φ(h_L(uᵢ)/h_K(uᵢ)) h_K(uᵢ) wᵢ``

Bodies known only through their support function (Orlicz sums in particular) are
replaced by an :func:`outer_polytope` before a volume is taken.
"""

from typing import Sequence
import logging

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from quermass.components.bodies import ConvexBody, DirectionSet, Ellipsoid, Polytope, oracle_of
from quermass.components.common import (
    DimensionMismatchException,
    UnboundedIntersectionException,
    UnsupportedBodyException,
)
from quermass.components.orlicz import CombinationWeights, OrliczFunction, orlicz_sum
from quermass.data.models import VariationEstimate
from quermass.utils import assertions
from quermass.utils.extrapolation import extrapolate_quotients, fitted_order, is_monotone


log = logging.getLogger(__name__)


#: Closure tolerance ``‖Σ wᵢuᵢ‖``, relative to the total mass when that exceeds one.
CLOSURE_TOLERANCE = 1e-9
#: Default steps of :func:`first_variation_volume`.
DEFAULT_EPSILONS = (0.08, 0.04, 0.02, 0.01, 0.005)


def default_direction_count(dim: int) -> int:
    """Number of directions used for outer polytopes when none are given."""

    return 32768 if dim >= 4 else 8192


class SurfaceMeasure:
    """The surface area measure ``S(P, ·)`` of a polytope: atoms at the facet normals.

    :param normals: ``(f, n)`` outer unit normals, pairwise distinct.
    :param weights: ``(f,)`` facet ``(n-1)``-volumes, all positive.
    :raises: :class:`ValueError` if a weight is not positive or the closure relation
        ``Σ wᵢuᵢ = 0`` fails.
    """

    def __init__(self, normals: np.ndarray, weights: np.ndarray):
        normals = np.asarray(normals, dtype=float)
        weights = np.asarray(weights, dtype=float)
        assertions.assert_is_unit_vectors(normals, normals.shape[1])
        if weights.shape != (normals.shape[0],):
            raise ValueError(f"Expected {normals.shape[0]} weights, got shape {weights.shape}.")
        if np.any(weights <= 0):
            raise ValueError("Surface measure weights must be positive.")

        #: Atom positions, ``(f, n)``.
        self.normals: np.ndarray = normals
        #: Atom masses, ``(f,)``.
        self.weights: np.ndarray = weights

        residual = self.closure_residual
        if residual > CLOSURE_TOLERANCE * max(1.0, self.total):
            log.error(f"Surface measure violates the closure relation by {residual:.3e}.")
            raise ValueError(f"Surface measure is not closed (residual {residual:.3e}).")


    @property
    def dim(self) -> int:
        return self.normals.shape[1]


    @property
    def total(self) -> float:
        """Total mass, the surface area of the polytope."""

        return float(self.weights.sum())


    @property
    def closure_residual(self) -> float:
        """``‖Σ wᵢuᵢ‖``."""

        return float(np.linalg.norm(self.weights @ self.normals))


    def integrate(self, values: np.ndarray) -> float:
        """Returns ``Σ values[i]·wᵢ``."""

        return float(np.dot(values, self.weights))


    def __len__(self) -> int:
        return self.weights.shape[0]


    def __repr__(self):
        return f"<SurfaceMeasure(dim={self.dim}, atoms={len(self)})>"


def _require_polytope(K: ConvexBody) -> Polytope:
    if not isinstance(K, Polytope):
        raise UnsupportedBodyException(
            f"'{K.name}' is a {type(K).__name__}; mixed volumes need a polytope first argument "
            f"(replace the body by its outer_polytope).")
    return K


def _require_same_dim(K: ConvexBody, L: ConvexBody) -> None:
    if K.dim != L.dim:
        raise DimensionMismatchException(f"Bodies live in R^{K.dim} and R^{L.dim}.")


def surface_area_measure(P: Polytope) -> SurfaceMeasure:
    """Returns the surface area measure of ``P``, one atom per facet.

    :raises: :class:`~quermass.components.common.UnsupportedBodyException` if ``P`` is not a polytope.
    """

    P = _require_polytope(P)
    return SurfaceMeasure(P.facet_normals, P.facet_weights)


def surface_area(P: Polytope) -> float:
    """Returns the total mass of ``S(P, ·)``."""

    return surface_area_measure(P).total


def volume(K: ConvexBody) -> float:
    """Returns the ``n``-volume of a polytope or an ellipsoid.

    Polytope volumes use ``(1/n) Σ h_P(uᵢ) wᵢ``; a disagreement with the simplex
    decomposition of the hull beyond ``1e-9`` is logged.

    :raises: :class:`~quermass.components.common.UnsupportedBodyException` for oracle
        bodies, which need an :func:`outer_polytope` first.
    """

    if isinstance(K, Ellipsoid):
        return K.volume
    if not isinstance(K, Polytope):
        raise UnsupportedBodyException(f"Cannot take the volume of oracle body '{K.name}' directly.")

    atom_sum = float(np.dot(K.facet_offsets, K.facet_weights)) / K.dim
    if abs(atom_sum - K.hull_volume) > 1e-9 * max(1.0, atom_sum):
        log.warning(f"Volume of '{K.name}' differs between atom sum ({atom_sum!r}) and "
                    f"simplex decomposition ({K.hull_volume!r}).")
    return atom_sum


def mixed_volume_V1(K: Polytope, L: ConvexBody) -> float:
    """``V₁(K, L) = (1/n) ∫ h_L dS(K, ·)``."""

    K = _require_polytope(K)
    _require_same_dim(K, L)
    return float(np.dot(L._support(K.facet_normals), K.facet_weights)) / K.dim


def lp_mixed_volume(K: Polytope, L: ConvexBody, p: float) -> float:
    """``V_p(K, L) = (1/n) ∫ h_L^p h_K^{1-p} dS(K, ·)``.

    :raises: :class:`ValueError` if ``p < 1``.
    """

    assertions.assert_is_float_or_int(p)
    if p < 1:
        raise ValueError(f"L_p mixed volumes need p >= 1, got {p=}.")
    K = _require_polytope(K)
    _require_same_dim(K, L)
    hK = K.facet_offsets
    hL = L._support(K.facet_normals)
    return float(np.dot(hL ** p * hK ** (1 - p), K.facet_weights)) / K.dim


def orlicz_mixed_volume(K: Polytope, L: ConvexBody, phi: OrliczFunction) -> float:
    """``V_φ(K, L) = (1/n) ∫ φ(h_L/h_K) h_K dS(K, ·)``."""

    K = _require_polytope(K)
    _require_same_dim(K, L)
    hK = K.facet_offsets
    hL = L._support(K.facet_normals)
    return float(np.dot(phi(hL / hK) * hK, K.facet_weights)) / K.dim


def outer_polytope(body: ConvexBody, directions: DirectionSet | None = None) -> Polytope:
    """Returns the polytope ``∩ᵢ {x : ⟨x, uᵢ⟩ <= h(uᵢ)}``, which contains ``body``.

    The intersection is computed through the dual hull of the points ``uᵢ / h(uᵢ)``:
    each facet ``⟨a, y⟩ + b = 0`` of that hull yields the vertex ``-a/b``.

    :param directions: Directions covering the sphere;
        :func:`default_direction_count` uniform directions by default.
    :raises: :class:`~quermass.components.common.UnboundedIntersectionException` if the
        directions do not surround the origin.
    """

    directions = directions or DirectionSet.uniform(body.dim, default_direction_count(body.dim))
    if directions.dim != body.dim:
        raise DimensionMismatchException(f"Directions in R^{directions.dim} for a body in R^{body.dim}.")
    U = directions.directions
    h = body._support(U)

    if body.dim == 1:
        upper, lower = h[U[:, 0] > 0], h[U[:, 0] < 0]
        if upper.size == 0 or lower.size == 0:
            raise UnboundedIntersectionException("Both directions of the line are needed.")
        return Polytope([[-lower.min()], [upper.min()]], name=body.name)

    try:
        dual = ConvexHull(U / h[:, None])
    except (QhullError, ValueError) as e:
        log.error(f"Dual hull of {len(directions)} directions failed for '{body.name}'.")
        raise UnboundedIntersectionException(f"Directions do not span R^{body.dim}: {e}")

    normals, offsets = dual.equations[:, :-1], dual.equations[:, -1]
    if np.any(offsets >= -1e-12):
        raise UnboundedIntersectionException(
            f"{len(directions)} directions do not surround the origin; the intersection is unbounded.")
    return Polytope(-normals / offsets[:, None], name=body.name)


def oracle_volume(body: ConvexBody, directions: DirectionSet | None = None) -> float:
    """Volume of a polytope or ellipsoid, or of the outer polytope of any other body."""

    if isinstance(body, (Polytope, Ellipsoid)):
        return volume(body)
    return volume(outer_polytope(body, directions))


def first_variation_volume(
    K: ConvexBody,
    L: ConvexBody,
    phi: OrliczFunction,
    eps: Sequence[float] = DEFAULT_EPSILONS,
    directions: DirectionSet | None = None,
    levels: int = 1,
) -> VariationEstimate:
    """Estimates ``V_φ(K, L) = (φ′(1⁻)/n) lim (V(K +_φ εL) - V(K)) / ε``.

    ``V(K)`` and every ``V(K +_φ εL)`` are volumes of outer polytopes on the same direction
    set, so that the discretisation error largely cancels in the differences.

    :param eps: Strictly decreasing steps, the smallest at least ``1e-4``.
    :param directions: Direction set of the outer polytopes.
    :param levels: Richardson elimination levels on the smallest steps.
    :return: The estimate; ``reference`` is the atom sum ``V_φ(K, L)`` (on the outer
        polytope of ``K`` when ``K`` is not a polytope).
    """

    assertions.assert_is_strictly_decreasing(eps)
    if eps[-1] < 1e-4:
        raise ValueError(f"Steps below 1e-4 are dominated by outer-polytope noise, got {eps[-1]}.")
    assertions.assert_is_int(levels)
    _require_same_dim(K, L)

    epsilons = np.asarray(eps, dtype=float)
    directions = directions or DirectionSet.uniform(K.dim, default_direction_count(K.dim))

    base = outer_polytope(oracle_of(K), directions)
    base_volume = volume(base)
    quotients = np.array([
        (volume(outer_polytope(orlicz_sum(K, L, CombinationWeights.epsilon(e), phi), directions)) - base_volume) / e
        for e in epsilons
    ])

    extrapolated = extrapolate_quotients(epsilons, quotients, levels)
    order = fitted_order(epsilons, quotients)
    monotone = is_monotone(quotients)
    if not monotone:
        log.warning(f"Non-monotone volume quotients for '{K.name}', '{L.name}', {phi.name}; "
                    f"{len(directions)} directions may be too few.")

    first_argument = K if isinstance(K, Polytope) else base
    return VariationEstimate(
        value=phi.left_derivative_at_1 / K.dim * extrapolated,
        epsilons=epsilons.tolist(),
        quotients=quotients.tolist(),
        extrapolated=extrapolated,
        fitted_order=None if np.isnan(order) else order,
        reference=orlicz_mixed_volume(first_argument, L, phi),
        monotone=monotone,
    )
