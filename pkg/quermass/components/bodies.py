"""Convex bodies in 𝒦ⁿ_o: polytopes, ellipsoids and support-function oracles.

A :class:`ConvexBody` is determined by its support function
``h_K(u) = sup {⟨u, y⟩ : y ∈ K}``. Every body in this module contains the origin in
its interior, which is validated at construction, because all Orlicz quantities
divide by ``h_K``. Bodies are immutable and every operation on them is pure.

Support functions are evaluated on batches: :meth:`ConvexBody.support` accepts a single
:class:`Direction`, a :class:`DirectionSet`, or an ``(m, n)`` array of unit rows.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import TYPE_CHECKING, Callable, Tuple, Union
import logging
import math

import numpy as np
from pydantic import ValidationError
from scipy.linalg import expm
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import ConvexHull, QhullError, cKDTree
from scipy.special import gamma

from quermass.components.common import DimensionMismatchException, InvalidBodyException
from quermass.data.models import BallSpec, BodyDocument, BodySpec, EllipsoidSpec, PolytopeSpec
from quermass.utils import assertions

if TYPE_CHECKING:
    from quermass.components.grassmannian import Subspace


log = logging.getLogger(__name__)


#: Default number of directions of a :class:`DirectionSet`.
DEFAULT_DIRECTION_COUNT = 4096
#: Origin-interior tolerance: ``r_in`` must exceed this.
INRADIUS_TOLERANCE = 1e-12
#: Determinant tolerance of the SL(n) flag.
SPECIAL_TOLERANCE = 1e-10

_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
#: Hull simplices whose plane equations lie this close are one facet.
_COPLANAR_TOLERANCE = 1e-8


def unit_ball_volume(k: int) -> float:
    """Volume ``ω_k = π^{k/2} / Γ(k/2 + 1)`` of the unit ball in ``ℝᵏ``.

    :seealso: :func:`quermass.components.grassmannian.omega`, the validated public entry point.
    """

    return float(math.pi ** (k / 2) / gamma(k / 2 + 1))


class Direction:
    """A unit vector ``u ∈ 𝕊ⁿ⁻¹``.

    :param coords: The coordinates; their euclidean norm must be ``1`` within ``1e-12``.
    :raises: :class:`ValueError` if ``coords`` is not a unit vector.
    """

    def __init__(self, coords):
        coords = np.array(coords, dtype=float).reshape(1, -1)
        assertions.assert_is_unit_vectors(coords, coords.shape[1])

        #: Coordinates as a read-only ``(n,)`` array.
        self.coords: np.ndarray = coords[0]
        self.coords.flags.writeable = False


    @classmethod
    def normalized(cls, vector) -> 'Direction':
        """Returns the direction of a non-zero ``vector``."""

        vector = np.asarray(vector, dtype=float)
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise ValueError("The zero vector has no direction.")
        return cls(vector / norm)


    @property
    def dim(self) -> int:
        return self.coords.shape[0]


    def __repr__(self):
        return f"<Direction({np.array2string(self.coords, precision=6)})>"


class DirectionSet:
    """A finite set of unit directions used to sample support functions.

    :param directions: ``(m, n)`` array of unit rows.
    :raises: :class:`ValueError` if a row is not a unit vector.
    """

    def __init__(self, directions: np.ndarray):
        directions = np.array(directions, dtype=float)
        assertions.assert_is_unit_vectors(directions, directions.shape[1] if directions.ndim == 2 else -1)

        #: The directions as a read-only ``(m, n)`` array.
        self.directions: np.ndarray = directions
        self.directions.flags.writeable = False


    @classmethod
    def uniform(cls, dim: int, count: int = DEFAULT_DIRECTION_COUNT, seed: int = 0) -> 'DirectionSet':
        """Returns ``count`` roughly uniform directions in ``ℝ^dim``.

        * ``dim = 1``: the two directions ``±1``;
        * ``dim = 2``: ``count`` equally spaced angles;
        * ``dim = 3``: ``count`` Fibonacci-sphere points;
        * ``dim >= 4``: ``count`` normalized Gaussian samples drawn with ``seed``.

        :raises: :class:`ValueError` if ``dim`` or ``count`` is not a positive integer.
        """

        assertions.assert_is_positive_int(dim)
        assertions.assert_is_positive_int(count)

        if dim == 1:
            return cls(np.array([[1.0], [-1.0]]))
        if dim == 2:
            angles = 2 * np.pi * np.arange(count) / count
            return cls(np.column_stack([np.cos(angles), np.sin(angles)]))
        if dim == 3:
            k = np.arange(count)
            z = 1.0 - (2 * k + 1) / count
            r = np.sqrt(1.0 - z ** 2)
            theta = _GOLDEN_ANGLE * k
            return cls(np.column_stack([r * np.cos(theta), r * np.sin(theta), z]))

        rng = np.random.default_rng(seed)
        samples = rng.standard_normal((count, dim))
        return cls(samples / np.linalg.norm(samples, axis=1, keepdims=True))


    @property
    def dim(self) -> int:
        return self.directions.shape[1]


    def __len__(self) -> int:
        return self.directions.shape[0]


    def __repr__(self):
        return f"<DirectionSet(dim={self.dim}, count={len(self)})>"


DirectionLike = Union[Direction, DirectionSet, np.ndarray]


def _as_directions(u: DirectionLike, dim: int) -> Tuple[np.ndarray, bool]:
    """Returns ``(rows, single)`` for any accepted direction input, validated against ``dim``."""

    if isinstance(u, Direction):
        rows, single = u.coords.reshape(1, -1), True
    elif isinstance(u, DirectionSet):
        rows, single = u.directions, False
    else:
        rows = np.asarray(u, dtype=float)
        single = rows.ndim == 1
        rows = np.atleast_2d(rows)

    if rows.shape[1] != dim:
        raise DimensionMismatchException(f"Expected directions in R^{dim}, got R^{rows.shape[1]}.")
    assertions.assert_is_unit_vectors(rows, dim)
    return rows, single


class LinearMap:
    """An invertible linear map ``T ∈ GL(n)``.

    :param matrix: An invertible ``n x n`` matrix.
    :raises: :class:`ValueError` if ``matrix`` is not square or is singular.
    """

    def __init__(self, matrix):
        matrix = np.array(matrix, dtype=float)
        assertions.assert_is_matrix(matrix)
        if matrix.shape[0] != matrix.shape[1]:
            raise ValueError(f"A linear map needs a square matrix, got shape {matrix.shape}.")
        det = float(np.linalg.det(matrix))
        if det == 0 or np.linalg.cond(matrix) > 1e12:
            raise ValueError("Linear map is singular.")

        #: The matrix of the map, read-only.
        self.matrix: np.ndarray = matrix
        self.matrix.flags.writeable = False
        #: The determinant.
        self.det: float = det


    @classmethod
    def scaling(cls, factor: float, dim: int) -> 'LinearMap':
        """Returns the dilation ``x ↦ factor·x`` of ``ℝ^dim``."""

        assertions.assert_is_positive(factor)
        return cls(factor * np.eye(dim))


    @classmethod
    def random_special(cls, dim: int, rng: np.random.Generator, spread: float = 0.3) -> 'LinearMap':
        """Returns a random map in ``SL(dim)``, the exponential of a random traceless matrix.

        :param spread: Scale of the generator; the condition number grows like ``e^{O(spread)}``.
        """

        generator = spread * rng.standard_normal((dim, dim))
        generator -= np.trace(generator) / dim * np.eye(dim)
        matrix = expm(generator)
        return cls(matrix / abs(np.linalg.det(matrix)) ** (1 / dim))


    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


    @property
    def is_special(self) -> bool:
        """Whether the map is volume preserving, ``|det - 1| <= 1e-10``."""

        return abs(self.det - 1.0) <= SPECIAL_TOLERANCE


    @property
    def singular_values(self) -> np.ndarray:
        return np.linalg.svd(self.matrix, compute_uv=False)


    def __repr__(self):
        return f"<LinearMap(dim={self.dim}, det={self.det:.6g})>"


class ConvexBody(ABC):
    """Base class of all convex bodies containing the origin in their interior.

    Subclasses implement :meth:`_support` on validated ``(m, n)`` arrays of unit rows,
    :meth:`apply_linear` and :meth:`project`.
    """

    def __init__(self, dim: int, inradius: float, circumradius: float, name: str | None = None):
        assertions.assert_is_positive_int(dim)
        if not inradius > INRADIUS_TOLERANCE:
            log.error(f"Rejected body {name!r} with inradius {inradius}.")
            raise InvalidBodyException(f"The origin must lie in the interior of the body (inradius {inradius:.3e}).")

        #: Ambient dimension ``n``.
        self.dim: int = dim
        #: Lower bound ``r_in`` on the support function, ``h(u) >= r_in`` for all unit ``u``.
        self.inradius: float = float(inradius)
        #: Upper bound on the support function; also its Lipschitz constant.
        self.circumradius: float = float(circumradius)
        #: Display name used in reports.
        self.name: str = name or self.__class__.__name__.lower()


    @abstractmethod
    def _support(self, directions: np.ndarray) -> np.ndarray:
        """Evaluates the support function on an ``(m, n)`` array of unit rows."""


    @abstractmethod
    def apply_linear(self, T: LinearMap) -> 'ConvexBody':
        """Returns the image ``TK``."""


    @abstractmethod
    def project(self, subspace: 'Subspace') -> 'ConvexBody':
        """Returns ``K|ξ`` expressed in the coordinates of the basis of ``ξ``."""


    def support(self, u: DirectionLike) -> Union[float, np.ndarray]:
        """Evaluates the support function ``h_K(u)``.

        :param u: A :class:`Direction`, a :class:`DirectionSet`, a unit ``(n,)`` vector or an
            ``(m, n)`` array of unit rows.
        :return: A float for a single direction, otherwise an ``(m,)`` array.
        :raises: :class:`ValueError` if a direction is not a unit vector.
        :raises: :class:`~quermass.components.common.DimensionMismatchException` if the
            directions are not in ``ℝⁿ``.
        """

        rows, single = _as_directions(u, self.dim)
        values = self._support(rows)
        return float(values[0]) if single else values


    def dilate(self, factor: float) -> 'ConvexBody':
        """Returns ``factor·K``."""

        return self.apply_linear(LinearMap.scaling(factor, self.dim))


    def _check_subspace(self, subspace: 'Subspace') -> np.ndarray:
        basis = np.asarray(subspace.basis, dtype=float)
        assertions.assert_is_orthonormal(basis)
        if basis.shape[0] != self.dim:
            raise DimensionMismatchException(f"Cannot project a body in R^{self.dim} onto a subspace of R^{basis.shape[0]}.")
        return basis


    def _check_linear(self, T: LinearMap) -> None:
        if T.dim != self.dim:
            raise DimensionMismatchException(f"Cannot apply a map of R^{T.dim} to a body in R^{self.dim}.")


    def is_sublinear(self, samples: int = 512, seed: int = 0, tolerance: float = 1e-9) -> bool:
        """Sampled check of subadditivity ``h(u + v) <= h(u) + h(v)``.

        Positive homogeneity is used to evaluate ``h(u + v) = ‖u + v‖·h((u + v)/‖u + v‖)``.
        """

        rng = np.random.default_rng(seed)
        u = rng.standard_normal((samples, self.dim))
        v = rng.standard_normal((samples, self.dim))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        v /= np.linalg.norm(v, axis=1, keepdims=True)
        w = u + v
        norms = np.linalg.norm(w, axis=1)
        keep = norms > 1e-8
        w = w[keep] / norms[keep, None]
        lhs = self._support(w) * norms[keep]
        rhs = self._support(u[keep]) + self._support(v[keep])
        return bool(np.all(lhs <= rhs + tolerance))


    @classmethod
    def from_spec(cls, spec: BodySpec) -> 'ConvexBody':
        """Builds a body from a validated body specification."""

        if isinstance(spec, PolytopeSpec):
            return Polytope(spec.vertices, name=spec.name)
        if isinstance(spec, EllipsoidSpec):
            return Ellipsoid(spec.shape, name=spec.name)
        if isinstance(spec, BallSpec):
            return Ellipsoid.ball(spec.radius, spec.dim, name=spec.name)
        raise TypeError(f"Unknown body specification {type(spec)}.")


    def __repr__(self):
        return f"<{self.__class__.__name__}(name={self.name!r}, dim={self.dim})>"


def _coplanar_groups(equations: np.ndarray) -> np.ndarray:
    """Labels ``0..f-1`` of the facets formed by simplices with plane equations within
    :data:`_COPLANAR_TOLERANCE` of each other, chained transitively.
    """

    pairs = cKDTree(equations).query_pairs(_COPLANAR_TOLERANCE, output_type="ndarray")
    count = len(equations)
    if pairs.size == 0:
        return np.arange(count)
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(count, count))
    _, labels = connected_components(graph, directed=False)
    return labels


def hull_facets(points: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, float, np.ndarray]:
    """Enumerates the facets of the convex hull of ``points``.

    Coplanar simplices of the triangulated hull are merged into one facet.

    :param points: ``(k, d)`` array with ``d >= 1``.
    :return: ``(normals, offsets, weights, volume, vertices)``: outer unit normals
        ``(f, d)``, signed distances ``h(normal)`` of the facet planes from the origin
        ``(f,)``, facet ``(d-1)``-volumes ``(f,)``, the ``d``-volume, and the hull
        vertices with redundant points removed.
    :raises: :class:`~quermass.components.common.InvalidBodyException` if the points are
        not affinely full-dimensional.
    """

    points = np.asarray(points, dtype=float)
    d = points.shape[1]

    if d == 1:
        low, high = points.min(), points.max()
        if not high > low:
            raise InvalidBodyException("A one-dimensional body needs two distinct vertices.")
        normals = np.array([[1.0], [-1.0]])
        return normals, np.array([high, -low]), np.ones(2), float(high - low), np.array([[low], [high]])

    try:
        hull = ConvexHull(points)
    except (QhullError, ValueError) as e:
        raise InvalidBodyException(f"Vertices are not affinely full-dimensional in R^{d}: {e}")
    if not hull.volume > 0:
        raise InvalidBodyException(f"Vertices span a degenerate hull in R^{d}.")

    simplex_points = points[hull.simplices]
    edges = simplex_points[:, 1:, :] - simplex_points[:, :1, :]
    gram = edges @ np.transpose(edges, (0, 2, 1))
    areas = np.sqrt(np.clip(np.linalg.det(gram), 0.0, None)) / math.factorial(d - 1)

    labels = _coplanar_groups(hull.equations)
    _, representative = np.unique(labels, return_index=True)
    weights = np.bincount(labels, weights=areas)
    normals = hull.equations[representative, :-1]
    normals /= np.linalg.norm(normals, axis=1, keepdims=True)
    offsets = -hull.equations[representative, -1]

    return normals, offsets, weights, float(hull.volume), points[hull.vertices]


class Polytope(ConvexBody):
    """A polytope given as the convex hull of a vertex list.

    Redundant (non-extreme) points are dropped. The facets are enumerated once at
    construction; they validate that the origin lies strictly inside.

    :param vertices: ``(k, n)`` array-like of points.
    :param name: Display name.
    :raises: :class:`~quermass.components.common.InvalidBodyException` if the vertices are
        not affinely full-dimensional or the origin is not interior.
    """

    def __init__(self, vertices, name: str | None = None):
        vertices = np.array(vertices, dtype=float)
        if vertices.ndim != 2 or vertices.shape[0] == 0:
            log.error(f"Rejected polytope {name!r}: malformed vertex array of shape {vertices.shape}.")
            raise InvalidBodyException("A polytope needs a non-empty (k, n) vertex array.")
        if not np.all(np.isfinite(vertices)):
            raise InvalidBodyException("Polytope vertices must be finite.")

        try:
            normals, offsets, weights, volume, extreme = hull_facets(vertices)
        except InvalidBodyException:
            log.error(f"Rejected polytope {name!r}: degenerate vertex set.")
            raise

        super().__init__(
            dim=vertices.shape[1],
            inradius=float(offsets.min()),
            circumradius=float(np.linalg.norm(extreme, axis=1).max()),
            name=name,
        )

        #: Extreme points, ``(k, n)``, read-only.
        self.vertices: np.ndarray = extreme
        #: Outer unit facet normals, ``(f, n)``.
        self.facet_normals: np.ndarray = normals
        #: Facet ``(n-1)``-volumes, ``(f,)``.
        self.facet_weights: np.ndarray = weights
        #: Facet distances ``h_P(normal)``, ``(f,)``.
        self.facet_offsets: np.ndarray = offsets
        #: Volume of the hull as computed by qhull's simplex decomposition.
        self.hull_volume: float = volume
        for array in (self.vertices, self.facet_normals, self.facet_weights, self.facet_offsets):
            array.flags.writeable = False


    def _support(self, directions: np.ndarray) -> np.ndarray:
        return (directions @ self.vertices.T).max(axis=1)


    def apply_linear(self, T: LinearMap) -> 'Polytope':
        self._check_linear(T)
        return Polytope(self.vertices @ T.matrix.T, name=self.name)


    def project(self, subspace: 'Subspace') -> 'Polytope':
        """Returns the convex hull of the projected vertices, in the coordinates of ``subspace``."""

        basis = self._check_subspace(subspace)
        return Polytope(self.vertices @ basis, name=f"{self.name}|xi")


class Ellipsoid(ConvexBody):
    """An origin-centred ellipsoid with support function ``h(u) = √(uᵀMu)``.

    :param shape: Symmetric positive-definite shape matrix ``M``.
    :param name: Display name.
    :raises: :class:`~quermass.components.common.InvalidBodyException` if ``shape`` is not
        symmetric positive definite.
    """

    def __init__(self, shape, name: str | None = None):
        shape = np.array(shape, dtype=float)
        try:
            assertions.assert_is_matrix(shape, rows=shape.shape[1] if shape.ndim == 2 else None)
        except (TypeError, ValueError) as e:
            log.error(f"Rejected ellipsoid {name!r}: {e}")
            raise InvalidBodyException(f"Invalid shape matrix: {e}")
        scale = max(np.abs(shape).max(), 1.0)
        if np.abs(shape - shape.T).max() > 1e-12 * scale:
            log.error(f"Rejected ellipsoid {name!r}: shape matrix is not symmetric.")
            raise InvalidBodyException("The shape matrix of an ellipsoid must be symmetric.")
        shape = (shape + shape.T) / 2
        eigenvalues = np.linalg.eigvalsh(shape)
        if eigenvalues.min() <= 0:
            log.error(f"Rejected ellipsoid {name!r}: shape matrix is not positive definite.")
            raise InvalidBodyException("The shape matrix of an ellipsoid must be positive definite.")

        super().__init__(
            dim=shape.shape[0],
            inradius=float(np.sqrt(eigenvalues.min())),
            circumradius=float(np.sqrt(eigenvalues.max())),
            name=name,
        )

        #: The shape matrix ``M``, read-only.
        self.shape: np.ndarray = shape
        self.shape.flags.writeable = False


    @classmethod
    def ball(cls, radius: float, dim: int, name: str | None = None) -> 'Ellipsoid':
        """Returns the centred ball of the given ``radius`` in ``ℝ^dim``."""

        assertions.assert_is_positive(radius)
        assertions.assert_is_positive_int(dim)
        return cls(radius ** 2 * np.eye(dim), name=name or f"ball{dim}d")


    @property
    def volume(self) -> float:
        """``ω_n·√det M``."""

        return unit_ball_volume(self.dim) * float(np.sqrt(np.linalg.det(self.shape)))


    def _support(self, directions: np.ndarray) -> np.ndarray:
        return np.sqrt(np.einsum("ij,jk,ik->i", directions, self.shape, directions))


    def apply_linear(self, T: LinearMap) -> 'Ellipsoid':
        self._check_linear(T)
        return Ellipsoid(T.matrix @ self.shape @ T.matrix.T, name=self.name)


    def project(self, subspace: 'Subspace') -> 'Ellipsoid':
        """Returns the ellipsoid with shape ``BᵀMB`` in the coordinates of ``subspace``."""

        basis = self._check_subspace(subspace)
        return Ellipsoid(basis.T @ self.shape @ basis, name=f"{self.name}|xi")


SupportFunction = Callable[[np.ndarray], np.ndarray]


class SupportOracle(ConvexBody):
    """A body known only through its support function.

    Oracle bodies are never differentiated; every downstream use samples them on
    direction sets.

    :param function: Maps an ``(m, n)`` array of unit rows to an ``(m,)`` array of
        support values.
    :param dim: Ambient dimension.
    :param inradius: Declared lower bound of the support function.
    :param lipschitz: Declared Lipschitz bound (circumradius).
    :param name: Display name.
    :raises: :class:`TypeError` if ``function`` is not callable.
    :raises: :class:`~quermass.components.common.InvalidBodyException` if ``inradius`` is not positive.
    """

    def __init__(self, function: SupportFunction, dim: int, inradius: float, lipschitz: float, name: str | None = None):
        assertions.assert_is_callable(function)
        super().__init__(dim=dim, inradius=inradius, circumradius=lipschitz, name=name)

        self._function = function


    @property
    def lipschitz(self) -> float:
        return self.circumradius


    def _support(self, directions: np.ndarray) -> np.ndarray:
        return np.asarray(self._function(directions), dtype=float).reshape(-1)


    def apply_linear(self, T: LinearMap) -> 'SupportOracle':
        """Composes the oracle with the adjoint rule ``h_{TK}(u) = ‖Tᵀu‖·h_K(Tᵀu / ‖Tᵀu‖)``."""

        self._check_linear(T)
        matrix = T.matrix
        inner = self._support

        def function(directions: np.ndarray) -> np.ndarray:
            images = directions @ matrix
            norms = np.linalg.norm(images, axis=1)
            return norms * inner(images / norms[:, None])

        singular = T.singular_values
        return SupportOracle(function, self.dim, self.inradius * singular.min(),
                             self.circumradius * singular.max(), name=self.name)


    def project(self, subspace: 'Subspace') -> 'SupportOracle':
        """Restricts the oracle to ``ξ``: ``h_{K|ξ}(w) = h_K(Bw)``."""

        basis = self._check_subspace(subspace)
        inner = self._support

        def function(directions: np.ndarray) -> np.ndarray:
            return inner(directions @ basis.T)

        return SupportOracle(function, basis.shape[1], self.inradius, self.circumradius, name=f"{self.name}|xi")


def oracle_of(body: ConvexBody) -> SupportOracle:
    """Wraps any body as a :class:`SupportOracle` with the same support function."""

    return SupportOracle(body._support, body.dim, body.inradius, body.circumradius, name=body.name)


def hausdorff_distance(K: ConvexBody, L: ConvexBody, directions: DirectionSet | None = None) -> float:
    """Sampled Hausdorff distance ``max_u |h_K(u) - h_L(u)|`` over ``directions``.

    The result is a lower bound on ``δ(K, L)`` converging as the direction set refines.

    :param directions: Directions in ``ℝⁿ``; :meth:`DirectionSet.uniform` by default.
    :raises: :class:`~quermass.components.common.DimensionMismatchException` if the
        bodies or directions live in different dimensions.
    """

    if K.dim != L.dim:
        raise DimensionMismatchException(f"Cannot compare bodies in R^{K.dim} and R^{L.dim}.")
    directions = directions or DirectionSet.uniform(K.dim)
    rows, _ = _as_directions(directions, K.dim)
    return float(np.abs(K._support(rows) - L._support(rows)).max())


def load_body(path: Union[str, Path]) -> ConvexBody:
    """Reads a UTF-8 JSON body specification file.

    :return: The body, named after the file unless the file names it.
    :raises: :class:`pydantic.ValidationError` if the file is malformed; the error names the
        offending line (for JSON syntax errors) or field.
    :raises: :class:`~quermass.components.common.InvalidBodyException` if the body is not in 𝒦ⁿ_o.
    """

    path = Path(path)
    text = path.read_text(encoding="utf-8")
    try:
        spec = BodyDocument.model_validate_json(text).root
    except ValidationError as e:
        log.error(f"Malformed body file '{path}': {e}")
        raise
    if spec.name is None:
        spec = spec.model_copy(update={"name": path.stem})
    return ConvexBody.from_spec(spec)
