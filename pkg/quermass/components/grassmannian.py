"""Haar sampling on the Grassmannian ``G_{n,j}`` and Monte Carlo estimators of affine
quermassintegrals.

All estimators average an integrand over ``N`` Haar-distributed subspaces:

* ``Φ_{n-j}(K) = (ω_n/ω_j) (∫ Vol_j(K|ξ)^{-n} dν)^{-1/n}``
* ``Φ_{φ,n-j}(K, L) = (ω_n/ω_j) (∫ V_φ(K|ξ, L|ξ) Vol_j(K|ξ)^{-n-1} dν)^{-1/n}``

Subspaces are drawn in blocks of :data:`BLOCK_SIZE` from a counter-based generator keyed
by the seed, with the block index in the counter. The same ``(seed, N)`` therefore yields
the same subspaces in every estimator, which is what makes differences of estimates
(common random numbers) precise.
"""

from typing import Callable, Sequence, Tuple
import logging
import math

import numpy as np

from quermass.components.bodies import (
    ConvexBody,
    DirectionSet,
    Ellipsoid,
    Polytope,
    hull_facets,
    unit_ball_volume,
)
from quermass.components.common import DimensionMismatchException, UnsupportedBodyException
from quermass.components.mixed_volumes import (
    DEFAULT_EPSILONS,
    first_variation_volume,
    lp_mixed_volume,
    orlicz_mixed_volume,
    oracle_volume,
    outer_polytope,
    volume,
)
from quermass.components.orlicz import CombinationWeights, OrliczFunction, orlicz_sum
from quermass.data.models import Estimate, VariationEstimate
from quermass.utils import assertions
from quermass.utils.extrapolation import extrapolate_quotients, fitted_order, is_monotone
from quermass.utils.statistics import delta_method


log = logging.getLogger(__name__)


#: Number of subspaces per generator block.
BLOCK_SIZE = 1024
#: Default number of Haar samples.
DEFAULT_SAMPLES = 20000
#: Default number of directions of outer polygons inside a projection plane.
DEFAULT_PROJECTION_DIRECTIONS = 512

_RANK_TOLERANCE = 1e-10


def omega(k: int) -> float:
    """Returns the volume ``ω_k`` of the unit ball in ``ℝᵏ``; ``ω_0 = 1``.

    :raises: :class:`TypeError` if ``k`` is not an integer.
    :raises: :class:`ValueError` if ``k`` is negative.
    """

    assertions.assert_is_int(k)
    if k < 0:
        raise ValueError(f"Unit ball volumes need k >= 0, got {k=}.")
    return unit_ball_volume(k)


class Subspace:
    """A point ``ξ ∈ G_{n,j}``, given by an ``n x j`` basis with orthonormal columns.

    :param basis: The basis; ``BᵀB = I`` within ``1e-10``.
    :raises: :class:`ValueError` if the columns are not orthonormal or ``j > n``.
    """

    def __init__(self, basis):
        basis = np.array(basis, dtype=float)
        if basis.ndim == 1:
            basis = basis[:, None]
        assertions.assert_is_orthonormal(basis)

        #: The ``(n, j)`` basis, read-only.
        self.basis: np.ndarray = basis
        self.basis.flags.writeable = False


    @property
    def n(self) -> int:
        return self.basis.shape[0]


    @property
    def j(self) -> int:
        return self.basis.shape[1]


    def coordinates(self, u: np.ndarray) -> np.ndarray:
        """Coordinates ``Bᵀu`` of (the projection of) ambient vectors, row-wise."""

        return np.asarray(u, dtype=float) @ self.basis


    def embed(self, w: np.ndarray) -> np.ndarray:
        """Ambient vectors ``Bw`` of coordinate rows ``w``."""

        return np.asarray(w, dtype=float) @ self.basis.T


    def __repr__(self):
        return f"<Subspace(n={self.n}, j={self.j})>"


def _orthonormalize(gaussian: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """QR of a stack of ``(n, j)`` matrices with the sign of ``diag(R)`` fixed to be positive.

    :return: ``(bases, ok)`` where ``ok`` flags numerically full-rank samples.
    """

    Q, R = np.linalg.qr(gaussian)
    diagonal = np.diagonal(R, axis1=-2, axis2=-1)
    signs = np.where(diagonal < 0, -1.0, 1.0)
    ok = np.abs(diagonal).min(axis=-1) > _RANK_TOLERANCE
    return Q * signs[..., None, :], ok


def sample_haar(n: int, j: int, rng: np.random.Generator) -> Subspace:
    """Draws a Haar-distributed ``ξ ∈ G_{n,j}`` by orthonormalizing a Gaussian ``n x j`` matrix.

    Numerically rank-deficient draws are discarded and redrawn.

    :raises: :class:`ValueError` unless ``1 <= j <= n``.
    """

    assertions.assert_is_dimension_pair(n, j)
    while True:
        basis, ok = _orthonormalize(rng.standard_normal((1, n, j)))
        if ok[0]:
            return Subspace(basis[0])


def _block_generator(seed: int, block: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed % 2 ** 64, counter=[0, 0, 0, block]))


def haar_bases(n: int, j: int, samples: int, seed: int = 0) -> np.ndarray:
    """Returns ``samples`` Haar-distributed orthonormal bases as an ``(N, n, j)`` array.

    Block ``b`` holds samples ``b·1024`` to ``(b+1)·1024 - 1`` and depends only on
    ``(seed, b)``.
    """

    assertions.assert_is_dimension_pair(n, j)
    assertions.assert_is_positive_int(samples)
    assertions.assert_is_int(seed)

    blocks = []
    for block, start in enumerate(range(0, samples, BLOCK_SIZE)):
        count = min(BLOCK_SIZE, samples - start)
        rng = _block_generator(seed, block)
        bases, ok = _orthonormalize(rng.standard_normal((count, n, j)))
        while not ok.all():
            redrawn, redrawn_ok = _orthonormalize(rng.standard_normal((int((~ok).sum()), n, j)))
            bases[~ok] = redrawn
            ok[~ok] = redrawn_ok
        blocks.append(bases)
    return np.concatenate(blocks)


class ProjectionBatch:
    """The projections ``K|ξ`` of one body onto a block of subspaces.

    Holds per-sample ``j``-volumes and, where mixed volumes with ``K|ξ`` as first argument
    are needed, the atoms of the surface area measures of ``K|ξ`` (in ambient coordinates,
    concatenated over samples). Every body is exact for ``j = 1`` (segments). For
    ``j >= 2``:

    * polytopes: the hull of the projected vertices;
    * ellipsoids: closed-form volumes ``ω_j √det(BᵀMB)``; atoms from outer polygons;
    * other bodies: outer polygons with ``projection_directions`` equally spaced normals
      for ``j = 2``, outer polytopes for ``j >= 3``.

    :param body: The body ``K``.
    :param bases: ``(m, n, j)`` orthonormal bases.
    :param projection_directions: Number of directions of outer polygons and polytopes in ``ξ``.
    :param exact: Use the exact polytope and ellipsoid paths. With ``False`` every body
        goes through outer polygons, so that it is discretised exactly like an Orlicz sum.
    """

    def __init__(self, body: ConvexBody, bases: np.ndarray,
                 projection_directions: int = DEFAULT_PROJECTION_DIRECTIONS, exact: bool = True):
        bases = np.asarray(bases, dtype=float)
        if bases.ndim != 3 or bases.shape[1] != body.dim:
            raise DimensionMismatchException(f"Expected bases of shape (m, {body.dim}, j), got {bases.shape}.")
        assertions.assert_is_positive_int(projection_directions)

        self.body: ConvexBody = body
        #: The ``(m, n, j)`` bases.
        self.bases: np.ndarray = bases
        self.projection_directions: int = projection_directions
        #: Per-sample ``j``-volumes, ``(m,)``.
        self.volumes: np.ndarray
        self._atoms: Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray] | None = None

        if self.j == 1:
            self.volumes, self._atoms = self._segments()
        elif exact and isinstance(body, Polytope):
            self.volumes, self._atoms = self._polytopes()
        elif exact and isinstance(body, Ellipsoid):
            shapes = np.transpose(bases, (0, 2, 1)) @ body.shape @ bases
            self.volumes = unit_ball_volume(self.j) * np.sqrt(np.linalg.det(shapes))
        elif self.j == 2:
            self.volumes, self._atoms = self._tangent_polygons()
        else:
            self.volumes, self._atoms = self._outer_polytopes()

        if np.any(self.volumes <= 0):
            raise ArithmeticError(f"Degenerate projection of '{body.name}' encountered.")


    @property
    def samples(self) -> int:
        return self.bases.shape[0]


    @property
    def n(self) -> int:
        return self.bases.shape[1]


    @property
    def j(self) -> int:
        return self.bases.shape[2]


    @property
    def atoms(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """``(sample_index, normals, weights, offsets)`` of the surface measures of the projections.

        ``normals`` are ambient unit vectors ``Bw``; ``offsets`` are ``h_K`` at them.
        """

        if self._atoms is None:
            _, self._atoms = self._tangent_polygons() if self.j == 2 else self._outer_polytopes()
        return self._atoms


    def _segments(self):
        directions = self.bases[:, :, 0]
        upper = self.body._support(directions)
        lower = self.body._support(-directions)
        index = np.tile(np.arange(self.samples), 2)
        atoms = (index, np.concatenate([directions, -directions]), np.ones(2 * self.samples),
                 np.concatenate([upper, lower]))
        return upper + lower, atoms


    def _polytopes(self):
        volumes = np.empty(self.samples)
        index, normals, weights, offsets = [], [], [], []
        for s, basis in enumerate(self.bases):
            facet_normals, facet_offsets, facet_weights, _, _ = hull_facets(self.body.vertices @ basis)
            volumes[s] = np.dot(facet_offsets, facet_weights) / self.j
            index.append(np.full(facet_offsets.shape[0], s))
            normals.append(facet_normals @ basis.T)
            weights.append(facet_weights)
            offsets.append(facet_offsets)
        atoms = (np.concatenate(index), np.concatenate(normals), np.concatenate(weights), np.concatenate(offsets))
        return volumes, atoms


    def _tangent_polygons(self):
        count = self.projection_directions
        step = 2 * np.pi / count
        angles = step * np.arange(count)
        plane = np.column_stack([np.cos(angles), np.sin(angles)])
        normals = np.einsum("snj,mj->smn", self.bases, plane).reshape(-1, self.n)
        h = self.body._support(normals).reshape(self.samples, count)
        edges = (np.roll(h, 1, axis=1) + np.roll(h, -1, axis=1) - 2 * np.cos(step) * h) / np.sin(step)
        edges = np.clip(edges, 0.0, None)
        volumes = 0.5 * (h * edges).sum(axis=1)
        atoms = (np.repeat(np.arange(self.samples), count), normals, edges.reshape(-1), h.reshape(-1))
        return volumes, atoms


    def _outer_polytopes(self):
        directions = DirectionSet.uniform(self.j, self.projection_directions)
        volumes = np.empty(self.samples)
        index, normals, weights, offsets = [], [], [], []
        for s, basis in enumerate(self.bases):
            polytope = outer_polytope(self.body.project(Subspace(basis)), directions)
            volumes[s] = volume(polytope)
            index.append(np.full(polytope.facet_offsets.shape[0], s))
            normals.append(polytope.facet_normals @ basis.T)
            weights.append(polytope.facet_weights)
            offsets.append(polytope.facet_offsets)
        atoms = (np.concatenate(index), np.concatenate(normals), np.concatenate(weights), np.concatenate(offsets))
        return volumes, atoms


    def mixed_volumes(self, L: ConvexBody, phi: OrliczFunction | None = None, p: float | None = None) -> np.ndarray:
        """Per-sample ``j``-dimensional mixed volumes of ``K|ξ`` and ``L|ξ``.

        ``V_φ`` if ``phi`` is given, ``V_p`` if ``p`` is given, ``V₁`` otherwise.

        :return: ``(m,)`` array.
        """

        if L.dim != self.n:
            raise DimensionMismatchException(f"Cannot mix a body in R^{L.dim} with projections from R^{self.n}.")
        index, normals, weights, offsets = self.atoms
        hL = L._support(normals)
        if phi is not None:
            integrand = phi(hL / offsets) * offsets
        elif p is not None:
            integrand = hL ** p * offsets ** (1 - p)
        else:
            integrand = hL
        return np.bincount(index, weights=integrand * weights, minlength=self.samples) / self.j


def sample_columns(n: int, j: int, samples: int, seed: int,
                    integrand: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Evaluates ``integrand`` (bases block -> ``(m, k)`` columns) over all Haar blocks."""

    bases = haar_bases(n, j, samples, seed)
    return np.concatenate([
        np.atleast_2d(integrand(bases[start:start + BLOCK_SIZE]).T).T
        for start in range(0, samples, BLOCK_SIZE)
    ])


def _powered_estimate(columns: np.ndarray, scale: float, power: float, seed: int,
                      combine: Callable[[np.ndarray], float] = lambda means: means[0]) -> Estimate:
    """``scale·combine(means)^power`` with delta-method standard errors."""

    value, stderr = delta_method(columns, lambda means: scale * combine(means) ** power)
    raw_mean, raw_stderr = delta_method(columns, combine)
    return Estimate(value=value, stderr=stderr, samples=columns.shape[0], seed=seed,
                    raw_mean=raw_mean, raw_stderr=raw_stderr)


def _exact_estimate(raw: float, power: float, seed: int, scale: float = 1.0) -> Estimate:
    return Estimate(value=scale * raw ** power, stderr=0.0, samples=1, seed=seed, raw_mean=raw, raw_stderr=0.0)


def _check_first_argument(K: ConvexBody, allow_outer: bool) -> None:
    if not isinstance(K, Polytope) and not allow_outer:
        raise UnsupportedBodyException(
            f"'{K.name}' is not a polytope; pass allow_outer=True to use outer polygons of its projections.")


def _check_pair(K: ConvexBody, L: ConvexBody, j: int) -> None:
    if K.dim != L.dim:
        raise DimensionMismatchException(f"Bodies live in R^{K.dim} and R^{L.dim}.")
    assertions.assert_is_dimension_pair(K.dim, j)


def affine_quermassintegral(
    K: ConvexBody,
    j: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    projection_directions: int = DEFAULT_PROJECTION_DIRECTIONS,
) -> Estimate:
    """Estimates ``Φ_{n-j}(K) = (ω_n/ω_j) (∫ Vol_j(K|ξ)^{-n} dν)^{-1/n}``.

    ``j = n`` gives ``Φ_0(K) = V(K)`` and ``j = 0`` gives ``Φ_n(K) = ω_n``, both without
    sampling. ``raw_mean`` is the mean of ``Vol_j(K|ξ)^{-n}``.

    :raises: :class:`ValueError` unless ``0 <= j <= n``.
    """

    n = K.dim
    assertions.assert_is_int(j)
    if j == 0:
        return _exact_estimate(1.0, 1.0, seed, scale=omega(n))
    assertions.assert_is_dimension_pair(n, j)
    if j == n:
        return _exact_estimate(oracle_volume(K) ** -n, -1.0 / n, seed)

    columns = sample_columns(n, j, samples, seed,
                              lambda bases: ProjectionBatch(K, bases, projection_directions).volumes ** -n)
    return _powered_estimate(columns, omega(n) / omega(j), -1.0 / n, seed)


def _mixed_estimate(K, L, j, samples, seed, projection_directions, allow_outer,
                    phi=None, p=None, alternative=False, directions=None) -> Estimate:
    _check_pair(K, L, j)
    _check_first_argument(K, allow_outer)
    n = K.dim

    if j == n:
        first = K if isinstance(K, Polytope) else outer_polytope(K, directions)
        mixed = orlicz_mixed_volume(first, L, phi) if phi is not None else lp_mixed_volume(first, L, p or 1.0)
        if alternative:
            return _exact_estimate(mixed ** -n, -1.0 / n, seed)
        return _exact_estimate(mixed * volume(first) ** (-n - 1), -1.0 / n, seed)

    def integrand(bases):
        batch = ProjectionBatch(K, bases, projection_directions)
        mixed = batch.mixed_volumes(L, phi=phi, p=None if phi is not None else (p or 1.0))
        if alternative:
            return mixed ** -n
        return mixed * batch.volumes ** (-n - 1)

    columns = sample_columns(n, j, samples, seed, integrand)
    return _powered_estimate(columns, omega(n) / omega(j), -1.0 / n, seed)


def orlicz_mixed_affine_quermassintegral(
    K: ConvexBody,
    L: ConvexBody,
    phi: OrliczFunction,
    j: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    projection_directions: int = DEFAULT_PROJECTION_DIRECTIONS,
    allow_outer: bool = False,
    directions: DirectionSet | None = None,
) -> Estimate:
    """Estimates ``Φ_{φ,n-j}(K, L) = (ω_n/ω_j) (∫ V_φ(K|ξ, L|ξ) Vol_j(K|ξ)^{-n-1} dν)^{-1/n}``.

    For ``j = n`` no sampling happens: ``Φ_{φ,0}(K, L)^{-n} = V_φ(K, L) V(K)^{-n-1}``.
    ``raw_mean`` is the mean of the integrand.

    :param allow_outer: Accept a non-polytope ``K``, whose projections are replaced by
        outer polygons (polytopes for ``j >= 3``) with ``projection_directions`` normals.
    :param directions: Sphere directions of the outer polytope of a non-polytope ``K`` when ``j = n``.
    :raises: :class:`~quermass.components.common.UnsupportedBodyException` for a
        non-polytope ``K`` without ``allow_outer``.
    :raises: :class:`~quermass.components.common.DimensionMismatchException` on a dimension mismatch.
    """

    return _mixed_estimate(K, L, j, samples, seed, projection_directions, allow_outer, phi=phi,
                           directions=directions)


def lp_mixed_affine_quermassintegral(
    K: ConvexBody,
    L: ConvexBody,
    p: float,
    j: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    projection_directions: int = DEFAULT_PROJECTION_DIRECTIONS,
    allow_outer: bool = False,
) -> Estimate:
    """Estimates ``Φ_{p,n-j}(K, L)``, the ``L_p`` case of
    :func:`orlicz_mixed_affine_quermassintegral` with the integrand ``V_p(K|ξ, L|ξ)``.

    :raises: :class:`ValueError` if ``p < 1``.
    """

    assertions.assert_is_float_or_int(p)
    if p < 1:
        raise ValueError(f"L_p mixed affine quermassintegrals need p >= 1, got {p=}.")
    return _mixed_estimate(K, L, j, samples, seed, projection_directions, allow_outer, p=float(p))


def mixed_affine_quermassintegral(
    K: ConvexBody,
    L: ConvexBody,
    j: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    projection_directions: int = DEFAULT_PROJECTION_DIRECTIONS,
    allow_outer: bool = False,
) -> Estimate:
    """Estimates ``Φ_{1,n-j}(K, L)``."""

    return lp_mixed_affine_quermassintegral(K, L, 1.0, j, samples, seed, projection_directions, allow_outer)


def alternative_orlicz_mixed_affine_quermassintegral(
    K: ConvexBody,
    L: ConvexBody,
    phi: OrliczFunction,
    j: int,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    projection_directions: int = DEFAULT_PROJECTION_DIRECTIONS,
    allow_outer: bool = False,
) -> Estimate:
    """Estimates ``(ω_n/ω_j) (∫ V_φ(K|ξ, L|ξ)^{-n} dν)^{-1/n}``.

    This variant weights projections by the mixed volume alone; it agrees with
    :func:`orlicz_mixed_affine_quermassintegral` for ``K = L``, where both equal ``Φ_{n-j}(K)``.
    """

    return _mixed_estimate(K, L, j, samples, seed, projection_directions, allow_outer, phi=phi, alternative=True)


def first_variation_quermass(
    K: ConvexBody,
    L: ConvexBody,
    phi: OrliczFunction,
    j: int,
    eps: Sequence[float] = DEFAULT_EPSILONS,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    projection_directions: int = DEFAULT_PROJECTION_DIRECTIONS,
    allow_outer: bool = False,
    tolerance: float = 0.05,
    levels: int = 1,
    directions: DirectionSet | None = None,
) -> VariationEstimate:
    """Estimates ``Φ_{n-j}(K)^{n+1} Φ_{φ,n-j}(K, L)^{-n} = (φ′(1⁻)/j) lim (Φ_{n-j}(K +_φ εL) - Φ_{n-j}(K)) / ε``.

    Every step shares the same subspaces. In each ``ξ`` the volume of
    ``(K +_φ εL)|ξ = K|ξ +_φ ε·L|ξ`` and the baseline ``Vol_j(K|ξ)`` are discretised
    alike, so that their difference is free of the outer-polygon bias. ``j = n`` is the
    first variation of volume.

    :param tolerance: Relative accuracy aimed at; the estimate is flagged ``noisy`` when
        three standard errors of the smallest-step quotient exceed it, with the number of
        samples that would suffice in ``required_samples``.
    :param directions: Sphere directions of the outer polytopes of the ``j = n`` case.
    :return: ``reference`` is ``Φ_{n-j}(K)^{n+1} Φ_{φ,n-j}(K, L)^{-n}`` on the same samples.
    """

    _check_pair(K, L, j)
    _check_first_argument(K, allow_outer)
    n = K.dim
    if j == n:
        return first_variation_volume(K, L, phi, eps, directions, levels=levels)

    assertions.assert_is_strictly_decreasing(eps)
    epsilons = np.asarray(eps, dtype=float)
    sums = [orlicz_sum(K, L, CombinationWeights.epsilon(e), phi) for e in epsilons]

    def integrand(bases):
        exact = ProjectionBatch(K, bases, projection_directions)
        base = ProjectionBatch(K, bases, projection_directions, exact=False)
        columns = [
            exact.mixed_volumes(L, phi=phi) * exact.volumes ** (-n - 1),
            exact.volumes ** -n,
            base.volumes ** -n,
        ]
        columns += [ProjectionBatch(S, bases, projection_directions).volumes ** -n for S in sums]
        return np.column_stack(columns)

    columns = sample_columns(n, j, samples, seed, integrand)
    scale = omega(n) / omega(j)

    quotients, errors = [], []
    for index, e in enumerate(epsilons):
        pair = columns[:, [2, 3 + index]]
        q, stderr = delta_method(pair, lambda means, e=e: scale * (means[1] ** (-1 / n) - means[0] ** (-1 / n)) / e)
        quotients.append(q)
        errors.append(stderr)
    quotients = np.asarray(quotients)

    reference, _ = delta_method(columns[:, :2], lambda means: scale * means[0] * means[1] ** (-(n + 1) / n))
    extrapolated = extrapolate_quotients(epsilons, quotients, levels)
    order = fitted_order(epsilons, quotients)

    monotone = is_monotone(quotients)
    if not monotone:
        log.warning(f"Non-monotone quermassintegral quotients for '{K.name}', '{L.name}', {phi.name}.")

    noise, signal = 3 * errors[-1], tolerance * abs(quotients[-1])
    noisy = bool(noise > signal)
    required = None
    if noisy:
        required = int(math.ceil(samples * (noise / max(signal, 1e-300)) ** 2))
        log.warning(f"Quotient noise exceeds {tolerance:.0%} of the signal with {samples} samples; "
                    f"about {required} are needed.")

    return VariationEstimate(
        value=phi.left_derivative_at_1 / j * extrapolated,
        epsilons=epsilons.tolist(),
        quotients=quotients.tolist(),
        extrapolated=extrapolated,
        fitted_order=None if np.isnan(order) else order,
        reference=reference,
        monotone=monotone,
        noisy=noisy,
        required_samples=required,
    )
