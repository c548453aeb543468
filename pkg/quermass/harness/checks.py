"""Verification checks.

Every check returns a :class:`~quermass.data.models.CheckResult` that carries ``lhs``,
``rhs``, the standard error of their difference and the tolerances used, so that its
status can be recomputed offline. Checks are grouped by id prefix:

* ``orlicz.*``: the Orlicz solver and the Orlicz sum (projection and linear-image lemmas,
  Hausdorff continuity, homogeneity);
* ``volume.*``: mixed volumes and the volume-level inequalities;
* ``quermass.*``: affine quermassintegrals and their Orlicz mixed versions, estimated on
  Haar samples. Checks comparing quantities on one set of subspaces share a
  :class:`SampledProjections`.

Monte Carlo stderrs of nonlinear combinations of sample means come from
:func:`~quermass.utils.statistics.delta_method`.
"""

from typing import Callable, Dict, List, Sequence, Tuple
import logging
import math
import threading

import numpy as np

from quermass.components.bodies import ConvexBody, DirectionSet, LinearMap, hausdorff_distance
from quermass.components.grassmannian import (
    BLOCK_SIZE,
    DEFAULT_PROJECTION_DIRECTIONS,
    ProjectionBatch,
    Subspace,
    affine_quermassintegral,
    first_variation_quermass,
    haar_bases,
    omega,
    orlicz_mixed_affine_quermassintegral,
)
from quermass.components.mixed_volumes import (
    first_variation_volume,
    lp_mixed_volume,
    mixed_volume_V1,
    oracle_volume,
    orlicz_mixed_volume,
    outer_polytope,
    surface_area_measure,
    volume,
)
from quermass.components.orlicz import (
    CombinationWeights,
    OrliczFunction,
    dilate_factor,
    make_power,
    orlicz_sum,
    orlicz_sum_linear_image_gap,
    orlicz_sum_projection_gap,
    solve_orlicz_support,
)
from quermass.data.models import CheckResult, CheckStatus, Tolerances
from quermass.harness.corpus import ball
from quermass.utils import assertions
from quermass.utils.extrapolation import is_monotone
from quermass.utils.statistics import delta_method


log = logging.getLogger(__name__)


DEFAULT_TOLERANCES = Tolerances()
#: Steps of the Hausdorff continuity sweep.
HAUSDORFF_STEPS = (1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6)
#: Parameters of the scalar limit ratio, increasing to ``1``.
LIMIT_RATIO_SCHEDULE = tuple(1 - 10.0 ** -k for k in range(1, 7))
#: A probe reports a candidate violation only beyond this many standard errors.
CANDIDATE_SIGMAS = 5.0


def check_name(family: str, *labels) -> str:
    """Builds a check id ``family[label,label,...]``."""

    def render(label):
        return f"{label:g}" if isinstance(label, float) else str(label)

    return f"{family}[{','.join(render(label) for label in labels)}]" if labels else family


def _relative(value: float) -> float:
    return max(1.0, abs(value))


class SampledProjections:
    """One set of Haar subspaces with per-body projections memoised across checks.

    :param n: Ambient dimension.
    :param j: Subspace dimension.
    :param samples: Number of subspaces.
    :param seed: Seed of the subspace stream.
    :param projection_directions: Directions of outer polygons in each subspace.
    """

    def __init__(self, n: int, j: int, samples: int, seed: int,
                 projection_directions: int = DEFAULT_PROJECTION_DIRECTIONS):
        assertions.assert_is_dimension_pair(n, j)
        assertions.assert_is_positive_int(samples)

        self.n: int = n
        self.j: int = j
        self.samples: int = samples
        self.seed: int = seed
        self.projection_directions: int = projection_directions

        self._bases: np.ndarray | None = None
        self._batches: Dict[Tuple[int, bool], Tuple[ConvexBody, List[ProjectionBatch]]] = {}
        self._lock = threading.Lock()


    @property
    def bases(self) -> np.ndarray:
        with self._lock:
            if self._bases is None:
                self._bases = haar_bases(self.n, self.j, self.samples, self.seed)
            return self._bases


    def batches(self, body: ConvexBody, cache: bool = True, exact: bool = True) -> List[ProjectionBatch]:
        """The projections of ``body``, one :class:`ProjectionBatch` per block of subspaces.

        :param exact: See :class:`ProjectionBatch`; ``False`` discretises ``body`` like an Orlicz sum.
        """

        key = (id(body), exact)
        with self._lock:
            hit = self._batches.get(key)
        if hit is not None:
            return hit[1]

        bases = self.bases
        batches = [ProjectionBatch(body, bases[start:start + BLOCK_SIZE], self.projection_directions, exact)
                   for start in range(0, self.samples, BLOCK_SIZE)]
        if cache:
            with self._lock:
                self._batches.setdefault(key, (body, batches))
        return batches


    def volumes(self, body: ConvexBody, cache: bool = True, exact: bool = True) -> np.ndarray:
        """Per-sample ``Vol_j(body|ξ)``."""

        return np.concatenate([batch.volumes for batch in self.batches(body, cache, exact)])


    def mixed_volumes(self, K: ConvexBody, L: ConvexBody, phi: OrliczFunction | None = None,
                      p: float | None = None, cache: bool = True) -> np.ndarray:
        """Per-sample mixed volumes of ``K|ξ`` and ``L|ξ``, see :meth:`ProjectionBatch.mixed_volumes`."""

        return np.concatenate([batch.mixed_volumes(L, phi=phi, p=p) for batch in self.batches(K, cache)])


def _difference(columns: np.ndarray, lhs: Callable, rhs: Callable) -> Tuple[float, float, float]:
    """``(lhs, rhs, stderr of lhs - rhs)`` of functions of the column means."""

    lhs_value, _ = delta_method(columns, lhs)
    rhs_value, _ = delta_method(columns, rhs)
    _, stderr = delta_method(columns, lambda means: lhs(means) - rhs(means))
    return lhs_value, rhs_value, stderr


def _probe(check_id: str, lhs: float, stderr: float, abs_tol: float,
           rerun: Callable[[], Tuple[float, float]] | None, **config) -> CheckResult:
    """Status of a conjecture probe ``lhs >= 1``.

    Noise alone never fails a probe: a shortfall within three standard errors passes, one
    beyond :data:`CANDIDATE_SIGMAS` that survives ``rerun`` is a candidate, anything else is
    inconclusive.
    """

    margin = lhs - 1.0
    if margin >= -max(abs_tol, 3 * stderr):
        status = CheckStatus.PASS
    elif margin < -max(abs_tol, CANDIDATE_SIGMAS * stderr) and rerun is not None:
        rerun_lhs, rerun_stderr = rerun()
        config.update(rerun_lhs=rerun_lhs, rerun_stderr=rerun_stderr)
        if rerun_lhs - 1.0 < -max(abs_tol, CANDIDATE_SIGMAS * rerun_stderr):
            status = CheckStatus.CANDIDATE
            log.warning(f"{check_id}: candidate violation, margin {rerun_lhs - 1.0:.3e} "
                        f"± {rerun_stderr:.1e} after a re-run.")
        else:
            status = CheckStatus.INCONCLUSIVE
    else:
        status = CheckStatus.INCONCLUSIVE
    return CheckResult(check_id=check_id, kind="probe", status=status, lhs=lhs, rhs=1.0, margin=margin,
                       stderr=stderr, abs_tol=abs_tol, stderr_factor=3.0, config=config)


# ----------------------------------------------------------------------------------------
# Orlicz solver and Orlicz sums
# ----------------------------------------------------------------------------------------

def check_solver_residual(phis: Sequence[OrliczFunction], tuples: int = 10000, seed: int = 0,
                          *, check_id: str | None = None) -> CheckResult:
    """Largest residual ``|a·φ(hK/λ) + b·φ(hL/λ) - 1|`` over random tuples, against ``1e-12``."""

    rng = np.random.default_rng(seed)
    per_weight = 100
    worst = 0.0
    for phi in phis:
        for _ in range(max(1, tuples // per_weight)):
            a, b = np.exp(rng.uniform(np.log(0.1), np.log(10.0), 2))
            hK, hL = np.exp(rng.uniform(np.log(0.1), np.log(10.0), (2, per_weight)))
            lam = solve_orlicz_support(hK, hL, CombinationWeights(a, b), phi)
            residual = np.abs(a * phi(hK / lam) + b * phi(hL / lam) - 1.0).max()
            worst = max(worst, float(residual))
    return CheckResult.identity(check_id or check_name("orlicz.solver_residual"), worst, 0.0, abs_tol=1e-12,
                                phis=[phi.name for phi in phis], tuples=tuples, seed=seed)


def check_solver_closed_form(exponents: Sequence[float] = (1.0, 1.5, 2.0, 3.0), tuples: int = 10000,
                             seed: int = 0, *, check_id: str | None = None) -> CheckResult:
    """Relative gap between solved supports and ``(a·hK^p + b·hL^p)^{1/p}``, against ``1e-10``."""

    rng = np.random.default_rng(seed)
    worst = 0.0
    for p in exponents:
        phi = make_power(p)
        for _ in range(max(1, tuples // 100)):
            a, b = np.exp(rng.uniform(np.log(0.1), np.log(10.0), 2))
            hK, hL = np.exp(rng.uniform(np.log(0.1), np.log(10.0), (2, 100)))
            lam = solve_orlicz_support(hK, hL, CombinationWeights(a, b), phi)
            exact = (a * hK ** p + b * hL ** p) ** (1 / p)
            worst = max(worst, float((np.abs(lam - exact) / exact).max()))
    return CheckResult.identity(check_id or check_name("orlicz.solver_closed_form"), worst, 0.0, abs_tol=1e-10,
                                exponents=list(exponents), tuples=tuples, seed=seed)


def check_projection_lemma(K: ConvexBody, L: ConvexBody, phi: OrliczFunction, eps: float, j: int,
                           pairs: int = 1000, seed: int = 0, *, check_id: str | None = None) -> CheckResult:
    """``(K +_φ εL)|ξ = K|ξ +_φ εL|ξ`` on ``pairs`` random (subspace, direction) pairs, within ``1e-9``."""

    per_subspace = 10
    bases = haar_bases(K.dim, j, max(1, pairs // per_subspace), seed)
    rng = np.random.default_rng(seed)
    gap = 0.0
    for basis in bases:
        directions = rng.standard_normal((per_subspace, j))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        gap = max(gap, orlicz_sum_projection_gap(K, L, eps, phi, Subspace(basis), DirectionSet(directions)))
    return CheckResult.identity(check_id or check_name("orlicz.projection_lemma", K.name, L.name, phi.name, eps, f"j={j}"),
                                gap, 0.0, abs_tol=1e-9, K=K.name, L=L.name, phi=phi.name, eps=eps, j=j,
                                pairs=pairs, seed=seed)


def check_linear_image(K: ConvexBody, L: ConvexBody, phi: OrliczFunction, eps: float, seed: int = 0,
                       *, check_id: str | None = None) -> CheckResult:
    """``T(K +_φ εL) = TK +_φ εTL`` for a random ``T ∈ GL(n)``, relative gap within ``1e-9``."""

    rng = np.random.default_rng(seed)
    T = LinearMap(1.7 * LinearMap.random_special(K.dim, rng).matrix)
    gap = orlicz_sum_linear_image_gap(K, L, eps, phi, T)
    return CheckResult.identity(check_id or check_name("orlicz.linear_image", K.name, L.name, phi.name, eps),
                                gap, 0.0, abs_tol=1e-9, K=K.name, L=L.name, phi=phi.name, eps=eps,
                                det=T.det, seed=seed)


def check_hausdorff_continuity(K: ConvexBody, L: ConvexBody, phi: OrliczFunction,
                               directions: DirectionSet | None = None,
                               steps: Sequence[float] = HAUSDORFF_STEPS,
                               *, check_id: str | None = None) -> CheckResult:
    """``δ(K +_φ εL, K) -> 0`` monotonically and linearly in ``ε``.

    The rate ``δ/ε`` at the smallest step is compared with its first-order limit
    ``max_u φ(h_L/h_K) h_K / φ′(1⁻)``. Non-monotone distances fail the check.
    """

    directions = directions or DirectionSet.uniform(K.dim)
    distances = np.array([hausdorff_distance(orlicz_sum(K, L, CombinationWeights.epsilon(e), phi), K, directions)
                          for e in steps])
    rates = distances / np.asarray(steps)
    hK, hL = K.support(directions), L.support(directions)
    limit = float((phi(hL / hK) * hK).max() / phi.left_derivative_at_1)
    monotone = bool(np.all(np.diff(distances) < 0))

    result = CheckResult.identity(check_id or check_name("orlicz.hausdorff_continuity", K.name, L.name, phi.name),
                                  float(rates[-1]), limit, abs_tol=1e-3 * limit, K=K.name, L=L.name,
                                  phi=phi.name, steps=list(steps), distances=distances.tolist(),
                                  monotone=monotone)
    if not monotone:
        result.status = CheckStatus.FAIL
    return result


def check_sum_homogeneity(K: ConvexBody, L: ConvexBody, phi: OrliczFunction, eps: float, factor: float = 2.5,
                          directions: DirectionSet | None = None, *, check_id: str | None = None) -> CheckResult:
    """``cK +_φ εcL = c(K +_φ εL)`` pointwise, relative gap within ``1e-10``."""

    directions = directions or DirectionSet.uniform(K.dim)
    w = CombinationWeights.epsilon(eps)
    scaled = orlicz_sum(K.dilate(factor), L.dilate(factor), w, phi).support(directions)
    expected = factor * orlicz_sum(K, L, w, phi).support(directions)
    gap = float((np.abs(scaled - expected) / expected).max())
    return CheckResult.identity(check_id or check_name("orlicz.sum_homogeneity", K.name, L.name, phi.name, eps),
                                gap, 0.0, abs_tol=1e-10, K=K.name, L=L.name, phi=phi.name, eps=eps, factor=factor)


def check_dilate_sum(K: ConvexBody, phi: OrliczFunction, directions: DirectionSet | None = None,
                     *, check_id: str | None = None) -> CheckResult:
    """``K +_φ K = K / φ⁻¹(1/2)`` pointwise, relative gap within ``1e-10``."""

    directions = directions or DirectionSet.uniform(K.dim)
    w = CombinationWeights()
    combined = orlicz_sum(K, K, w, phi).support(directions)
    expected = dilate_factor(w, phi) * K.support(directions)
    gap = float((np.abs(combined - expected) / expected).max())
    return CheckResult.identity(check_id or check_name("orlicz.dilate_sum", K.name, phi.name), gap, 0.0,
                                abs_tol=1e-10, K=K.name, phi=phi.name, factor=dilate_factor(w, phi))


# ----------------------------------------------------------------------------------------
# Mixed volumes and volume-level inequalities
# ----------------------------------------------------------------------------------------

def check_representation(P: ConvexBody, tolerances: Tolerances = DEFAULT_TOLERANCES,
                         *, check_id: str | None = None) -> CheckResult:
    """Atom-sum volume equals the simplex-decomposition volume; the closure residual is echoed and must vanish."""

    measure = surface_area_measure(P)
    atom_volume = volume(P)
    result = CheckResult.identity(check_id or check_name("volume.representation", P.name), atom_volume,
                                  P.hull_volume, abs_tol=tolerances.atom_sum * _relative(atom_volume),
                                  P=P.name, atoms=len(measure), closure=measure.closure_residual)
    if measure.closure_residual > tolerances.atom_sum * _relative(measure.total):
        result.status = CheckStatus.FAIL
    return result


def check_vphi_self(K: ConvexBody, phi: OrliczFunction, tolerances: Tolerances = DEFAULT_TOLERANCES,
                    *, check_id: str | None = None) -> CheckResult:
    """``V_φ(K, K) = V(K)``."""

    V = volume(K)
    return CheckResult.identity(check_id or check_name("volume.vphi_self", K.name, phi.name),
                                orlicz_mixed_volume(K, K, phi), V, abs_tol=tolerances.atom_sum * _relative(V),
                                K=K.name, phi=phi.name)


def check_vphi_dilate(K: ConvexBody, phi: OrliczFunction, factor: float,
                      tolerances: Tolerances = DEFAULT_TOLERANCES, *, check_id: str | None = None) -> CheckResult:
    """``V_φ(K, λK) = φ(λ) V(K)``."""

    expected = phi(factor) * volume(K)
    return CheckResult.identity(check_id or check_name("volume.vphi_dilate", K.name, phi.name, factor),
                                orlicz_mixed_volume(K, K.dilate(factor), phi), expected,
                                abs_tol=tolerances.atom_sum * _relative(expected), K=K.name, phi=phi.name,
                                factor=factor)


def check_lp_vs_phi(K: ConvexBody, L: ConvexBody, p: float, *, check_id: str | None = None) -> CheckResult:
    """``V_p(K, L)`` equals ``V_φ(K, L)`` for ``φ = t^p`` within ``1e-12`` relative."""

    lp = lp_mixed_volume(K, L, p)
    phi = orlicz_mixed_volume(K, L, make_power(p))
    return CheckResult.identity(check_id or check_name("volume.lp_vs_phi", K.name, L.name, float(p)), lp, phi,
                                abs_tol=1e-12 * _relative(phi), K=K.name, L=L.name, p=p)


def check_minkowski(K: ConvexBody, L: ConvexBody, tolerances: Tolerances = DEFAULT_TOLERANCES,
                    *, check_id: str | None = None) -> CheckResult:
    """``V₁(K, L)ⁿ >= V(K)^{n-1} V(L)``, normalized to ``lhs/rhs >= 1``."""

    n = K.dim
    ratio = mixed_volume_V1(K, L) ** n / (volume(K) ** (n - 1) * oracle_volume(L))
    return CheckResult.inequality(check_id or check_name("volume.minkowski", K.name, L.name), ratio, 1.0,
                                  abs_tol=tolerances.atom_sum, K=K.name, L=L.name)


def check_lp_minkowski(K: ConvexBody, L: ConvexBody, p: float, tolerances: Tolerances = DEFAULT_TOLERANCES,
                       *, check_id: str | None = None) -> CheckResult:
    """``V_p(K, L)ⁿ >= V(K)^{n-p} V(L)^p``, normalized to ``lhs/rhs >= 1``."""

    n = K.dim
    ratio = lp_mixed_volume(K, L, p) ** n / (volume(K) ** (n - p) * oracle_volume(L) ** p)
    return CheckResult.inequality(check_id or check_name("volume.lp_minkowski", K.name, L.name, float(p)), ratio,
                                  1.0, abs_tol=tolerances.atom_sum, K=K.name, L=L.name, p=p)


def check_orlicz_minkowski_volume(K: ConvexBody, L: ConvexBody, phi: OrliczFunction,
                                  tolerances: Tolerances = DEFAULT_TOLERANCES,
                                  *, check_id: str | None = None) -> CheckResult:
    """``V_φ(K, L)/V(K) >= φ((V(L)/V(K))^{1/n})``."""

    V = volume(K)
    lhs = orlicz_mixed_volume(K, L, phi) / V
    rhs = phi((oracle_volume(L) / V) ** (1 / K.dim))
    return CheckResult.inequality(check_id or check_name("volume.orlicz_minkowski", K.name, L.name, phi.name),
                                  lhs, rhs, abs_tol=tolerances.atom_sum, K=K.name, L=L.name, phi=phi.name)


def check_orlicz_minkowski_volume_dilate(K: ConvexBody, phi: OrliczFunction, factor: float,
                                         tolerances: Tolerances = DEFAULT_TOLERANCES,
                                         *, check_id: str | None = None) -> CheckResult:
    """Equality ``V_φ(K, cK)/V(K) = φ(c)`` of the Orlicz-Minkowski inequality for dilates."""

    V = volume(K)
    lhs = orlicz_mixed_volume(K, K.dilate(factor), phi) / V
    rhs = phi((volume(K.dilate(factor)) / V) ** (1 / K.dim))
    return CheckResult.identity(check_id or check_name("volume.orlicz_minkowski_dilate", K.name, phi.name, factor),
                                lhs, rhs, abs_tol=tolerances.atom_sum * _relative(rhs), K=K.name, phi=phi.name,
                                factor=factor)


def _outer_volume(body: ConvexBody, directions: DirectionSet | None) -> float:
    """Volume of the outer polytope of ``body``.

    Volume-level inequalities involving Orlicz sums take every volume on the same direction set.
    """

    return volume(outer_polytope(body, directions))


def check_brunn_minkowski_volume(K: ConvexBody, L: ConvexBody, directions: DirectionSet | None = None,
                                 tolerances: Tolerances = DEFAULT_TOLERANCES,
                                 *, check_id: str | None = None) -> CheckResult:
    """``V(K + L)^{1/n} >= V(K)^{1/n} + V(L)^{1/n}``, normalized to a ratio against ``1``."""

    n = K.dim
    total = _outer_volume(orlicz_sum(K, L, CombinationWeights(), make_power(1.0)), directions)
    ratio = total ** (1 / n) / (_outer_volume(K, directions) ** (1 / n) + _outer_volume(L, directions) ** (1 / n))
    return CheckResult.inequality(check_id or check_name("volume.brunn_minkowski", K.name, L.name), ratio, 1.0,
                                  abs_tol=tolerances.outer_volume, K=K.name, L=L.name)


def check_lp_brunn_minkowski_volume(K: ConvexBody, L: ConvexBody, p: float,
                                    directions: DirectionSet | None = None,
                                    tolerances: Tolerances = DEFAULT_TOLERANCES,
                                    *, check_id: str | None = None) -> CheckResult:
    """``V(K +_p L)^{p/n} >= V(K)^{p/n} + V(L)^{p/n}``, normalized to a ratio against ``1``."""

    n = K.dim
    total = _outer_volume(orlicz_sum(K, L, CombinationWeights(), make_power(p)), directions)
    ratio = total ** (p / n) / (_outer_volume(K, directions) ** (p / n) + _outer_volume(L, directions) ** (p / n))
    return CheckResult.inequality(check_id or check_name("volume.lp_brunn_minkowski", K.name, L.name, float(p)),
                                  ratio, 1.0, abs_tol=tolerances.outer_volume, K=K.name, L=L.name, p=p)


def _orlicz_bm_terms(K: ConvexBody, L: ConvexBody, phi: OrliczFunction, eps: float,
                     directions: DirectionSet | None) -> float:
    n = K.dim
    combined = _outer_volume(orlicz_sum(K, L, CombinationWeights.epsilon(eps), phi), directions)
    return (phi((_outer_volume(K, directions) / combined) ** (1 / n))
            + eps * phi((_outer_volume(L, directions) / combined) ** (1 / n)))


def check_orlicz_bm_volume(K: ConvexBody, L: ConvexBody, phi: OrliczFunction, eps: float,
                           directions: DirectionSet | None = None, tolerances: Tolerances = DEFAULT_TOLERANCES,
                           *, check_id: str | None = None) -> CheckResult:
    """``1 >= φ((V(K)/V(K +_φ εL))^{1/n}) + ε·φ((V(L)/V(K +_φ εL))^{1/n})``."""

    rhs = _orlicz_bm_terms(K, L, phi, eps, directions)
    return CheckResult.inequality(check_id or check_name("volume.orlicz_bm", K.name, L.name, phi.name, eps),
                                  1.0, rhs, abs_tol=tolerances.outer_volume, K=K.name, L=L.name, phi=phi.name,
                                  eps=eps)


def check_orlicz_bm_volume_dilate(K: ConvexBody, phi: OrliczFunction, eps: float, factor: float,
                                  directions: DirectionSet | None = None,
                                  tolerances: Tolerances = DEFAULT_TOLERANCES,
                                  *, check_id: str | None = None) -> CheckResult:
    """Equality of the volume-level Orlicz-Brunn-Minkowski inequality for ``L = cK``."""

    rhs = _orlicz_bm_terms(K, K.dilate(factor), phi, eps, directions)
    return CheckResult.identity(check_id or check_name("volume.orlicz_bm_dilate", K.name, phi.name, eps, factor),
                                1.0, rhs, abs_tol=tolerances.outer_volume, K=K.name, phi=phi.name, eps=eps,
                                factor=factor)


def check_decomposition_volume(K: ConvexBody, L: ConvexBody, phi: OrliczFunction, eps: float,
                               directions: DirectionSet | None = None,
                               *, check_id: str | None = None) -> CheckResult:
    """``V_φ(A, K) + ε·V_φ(A, L) = V(A)`` on the outer polytope ``A`` of ``K +_φ εL``, within ``1e-6`` relative."""

    A = outer_polytope(orlicz_sum(K, L, CombinationWeights.epsilon(eps), phi), directions)
    lhs = orlicz_mixed_volume(A, K, phi) + eps * orlicz_mixed_volume(A, L, phi)
    rhs = volume(A)
    return CheckResult.identity(check_id or check_name("volume.decomposition", K.name, L.name, phi.name, eps),
                                lhs, rhs, abs_tol=1e-6 * rhs, K=K.name, L=L.name, phi=phi.name, eps=eps,
                                vertices=int(A.vertices.shape[0]))


def check_first_variation_volume(K: ConvexBody, L: ConvexBody, phi: OrliczFunction, eps: Sequence[float],
                                 directions: DirectionSet | None = None,
                                 tolerances: Tolerances = DEFAULT_TOLERANCES,
                                 *, check_id: str | None = None) -> CheckResult:
    """``(φ′(1⁻)/n) lim (V(K +_φ εL) - V(K))/ε = V_φ(K, L)`` within ``variation_volume`` relative."""

    estimate = first_variation_volume(K, L, phi, eps, directions)
    return CheckResult.identity(check_id or check_name("volume.first_variation", K.name, L.name, phi.name),
                                estimate.value, estimate.reference,
                                abs_tol=tolerances.variation_volume * abs(estimate.reference),
                                K=K.name, L=L.name, phi=phi.name, epsilons=estimate.epsilons,
                                quotients=estimate.quotients, fitted_order=estimate.fitted_order,
                                monotone=estimate.monotone)


# ----------------------------------------------------------------------------------------
# Affine quermassintegrals
# ----------------------------------------------------------------------------------------

def check_ball_law(n: int, j: int, radius: float, samples: int, seed: int = 0,
                   *, check_id: str | None = None) -> CheckResult:
    """``Φ_{n-j}(rB) = ω_n r^j`` within three stderrs and ``1%``."""

    estimate = affine_quermassintegral(ball(n, radius), j, samples, seed)
    expected = omega(n) * radius ** j
    return CheckResult.identity(check_id or check_name("quermass.ball_law", f"n={n}", f"j={j}", float(radius)),
                                estimate.value, expected, stderr=estimate.stderr, abs_tol=0.01 * expected,
                                n=n, j=j, radius=radius, samples=samples, seed=seed)


def check_boundary_values(K: ConvexBody, *, check_id: str | None = None) -> CheckResult:
    """``Φ_0(K) = V(K)`` and ``Φ_n(K) = ω_n``, both without sampling."""

    n = K.dim
    top = affine_quermassintegral(K, n).value
    bottom = affine_quermassintegral(K, 0).value
    result = CheckResult.identity(check_id or check_name("quermass.boundary_values", K.name), top,
                                  oracle_volume(K), abs_tol=1e-12 * _relative(top), K=K.name,
                                  phi_n=bottom, omega_n=omega(n))
    if bottom != omega(n):
        result.status = CheckStatus.FAIL
    return result


def check_homogeneity(K: ConvexBody, j: int, factor: float, samples: int, seed: int = 0,
                      *, check_id: str | None = None) -> CheckResult:
    """``Φ_{n-j}(cK) = c^j Φ_{n-j}(K)`` on shared subspaces."""

    scaled = affine_quermassintegral(K.dilate(factor), j, samples, seed)
    base = affine_quermassintegral(K, j, samples, seed)
    expected = factor ** j * base.value
    return CheckResult.identity(check_id or check_name("quermass.homogeneity", K.name, f"j={j}", factor),
                                scaled.value, expected, abs_tol=1e-9 * _relative(expected), K=K.name, j=j,
                                factor=factor, samples=samples, seed=seed, stderr_estimate=base.stderr)


def _powered(means: np.ndarray, index: int, scale: float, n: int) -> float:
    return scale * means[index] ** (-1.0 / n)


def check_self_mixed(K: ConvexBody, phi: OrliczFunction, projections: SampledProjections,
                     *, check_id: str | None = None) -> CheckResult:
    """``Φ_{φ,n-j}(K, K) = Φ_{n-j}(K)`` on shared subspaces."""

    n, j = projections.n, projections.j
    volumes = projections.volumes(K)
    columns = np.column_stack([projections.mixed_volumes(K, K, phi=phi) * volumes ** (-n - 1), volumes ** -n])
    scale = omega(n) / omega(j)
    lhs, rhs, stderr = _difference(columns, lambda m: _powered(m, 0, scale, n), lambda m: _powered(m, 1, scale, n))
    return CheckResult.identity(check_id or check_name("quermass.self_mixed", K.name, phi.name, f"j={j}"),
                                lhs, rhs, stderr=stderr, abs_tol=1e-9 * _relative(rhs), K=K.name, phi=phi.name,
                                j=j, samples=projections.samples, seed=projections.seed)


def check_lambda_scaling(K: ConvexBody, phi: OrliczFunction, factor: float, projections: SampledProjections,
                         *, check_id: str | None = None) -> CheckResult:
    """``Φ_{φ,n-j}(K, λK)·φ(λ)^{1/n} = Φ_{n-j}(K)`` on shared subspaces."""

    n, j = projections.n, projections.j
    volumes = projections.volumes(K)
    mixed = projections.mixed_volumes(K, K.dilate(factor), phi=phi)
    columns = np.column_stack([mixed * volumes ** (-n - 1), volumes ** -n])
    scale = omega(n) / omega(j)
    correction = phi(factor) ** (1.0 / n)
    lhs, rhs, stderr = _difference(columns, lambda m: correction * _powered(m, 0, scale, n),
                                   lambda m: _powered(m, 1, scale, n))
    return CheckResult.identity(check_id or check_name("quermass.lambda_scaling", K.name, phi.name, factor, f"j={j}"),
                                lhs, rhs, stderr=stderr, abs_tol=1e-9 * _relative(rhs), K=K.name, phi=phi.name,
                                factor=factor, j=j, samples=projections.samples, seed=projections.seed)


def check_lp_vs_phi_quermass(K: ConvexBody, L: ConvexBody, p: float, projections: SampledProjections,
                             *, check_id: str | None = None) -> CheckResult:
    """The ``L_p`` and ``φ = t^p`` integrands agree in mean within ``1e-12`` relative."""

    n, j = projections.n, projections.j
    weights = projections.volumes(K) ** (-n - 1)
    lp = float(np.mean(projections.mixed_volumes(K, L, p=p) * weights))
    phi = float(np.mean(projections.mixed_volumes(K, L, phi=make_power(p)) * weights))
    return CheckResult.identity(check_id or check_name("quermass.lp_vs_phi", K.name, L.name, float(p), f"j={j}"),
                                lp, phi, abs_tol=1e-12 * abs(phi), K=K.name, L=L.name, p=p, j=j,
                                samples=projections.samples, seed=projections.seed)


def check_alternative_self(K: ConvexBody, phi: OrliczFunction, projections: SampledProjections,
                           *, check_id: str | None = None) -> CheckResult:
    """The variant weighting by ``V_φ(K|ξ, L|ξ)^{-n}`` alone also equals ``Φ_{n-j}(K)`` when ``K = L``."""

    n, j = projections.n, projections.j
    columns = np.column_stack([projections.mixed_volumes(K, K, phi=phi) ** -n, projections.volumes(K) ** -n])
    scale = omega(n) / omega(j)
    lhs, rhs, stderr = _difference(columns, lambda m: _powered(m, 0, scale, n), lambda m: _powered(m, 1, scale, n))
    return CheckResult.identity(check_id or check_name("quermass.alternative_self", K.name, phi.name, f"j={j}"),
                                lhs, rhs, stderr=stderr, abs_tol=1e-9 * _relative(rhs), K=K.name, phi=phi.name,
                                j=j, samples=projections.samples, seed=projections.seed)


def check_degeneration(K: ConvexBody, L: ConvexBody, phi: OrliczFunction,
                       *, check_id: str | None = None) -> CheckResult:
    """For ``j = n``: ``Φ_{φ,0}(K, L)^{-n} = V_φ(K, L) V(K)^{-n-1}``, within ``1e-10`` relative."""

    n = K.dim
    lhs = orlicz_mixed_affine_quermassintegral(K, L, phi, n).value ** -n
    rhs = orlicz_mixed_volume(K, L, phi) * volume(K) ** (-n - 1)
    return CheckResult.identity(check_id or check_name("quermass.degeneration", K.name, L.name, phi.name), lhs, rhs,
                                abs_tol=1e-10 * abs(rhs), K=K.name, L=L.name, phi=phi.name)


def check_sl_invariance(K: ConvexBody, T: LinearMap, label: str, j: int, samples: int, seed: int = 0,
                        L: ConvexBody | None = None, phi: OrliczFunction | None = None,
                        *, check_id: str | None = None) -> CheckResult:
    """``Φ_{n-j}(TK) = Φ_{n-j}(K)`` (or ``Φ_{φ,n-j}(TK, TL) = Φ_{φ,n-j}(K, L)`` when ``L`` and
    ``phi`` are given) for ``T ∈ SL(n)``, on independent seeds, within three combined stderrs.
    """

    if not T.is_special:
        raise ValueError(f"Expected a volume preserving map, got det {T.det}.")
    if L is None:
        image = affine_quermassintegral(K.apply_linear(T), j, samples, seed + 1)
        base = affine_quermassintegral(K, j, samples, seed)
        family, labels = "quermass.sl_invariance", (K.name, label, f"j={j}")
    else:
        image = orlicz_mixed_affine_quermassintegral(K.apply_linear(T), L.apply_linear(T), phi, j, samples, seed + 1)
        base = orlicz_mixed_affine_quermassintegral(K, L, phi, j, samples, seed)
        family, labels = "quermass.sl_invariance_mixed", (K.name, L.name, phi.name, label, f"j={j}")
    stderr = math.hypot(image.stderr, base.stderr)
    return CheckResult.identity(check_id or check_name(family, *labels), image.value, base.value, stderr=stderr,
                                abs_tol=1e-12, K=K.name, L=None if L is None else L.name,
                                phi=None if phi is None else phi.name, map=label, j=j, samples=samples,
                                seeds=[seed, seed + 1])


def check_stderr_scaling(K: ConvexBody, j: int, samples: int, seed: int = 0,
                         *, check_id: str | None = None) -> CheckResult:
    """The stderr of ``Φ_{n-j}`` shrinks like ``N^{-1/2}``: ten times the samples, ``√10`` times smaller, within ``20%``."""

    small_samples = max(100, samples // 10)
    small = affine_quermassintegral(K, j, small_samples, seed)
    large = affine_quermassintegral(K, j, small_samples * 10, seed)
    if large.stderr == 0:
        ratio = 1.0
    else:
        ratio = small.stderr / large.stderr / math.sqrt(10.0)
    return CheckResult.identity(check_id or check_name("quermass.stderr_scaling", K.name, f"j={j}"), ratio, 1.0,
                                abs_tol=0.2, K=K.name, j=j, samples=[small_samples, small_samples * 10],
                                stderrs=[small.stderr, large.stderr], seed=seed)


def check_first_variation_quermass(K: ConvexBody, L: ConvexBody, phi: OrliczFunction, j: int,
                                   eps: Sequence[float], samples: int, seed: int = 0,
                                   projection_directions: int = DEFAULT_PROJECTION_DIRECTIONS,
                                   tolerances: Tolerances = DEFAULT_TOLERANCES,
                                   *, check_id: str | None = None) -> CheckResult:
    """``(φ′(1⁻)/j) lim (Φ_{n-j}(K +_φ εL) - Φ_{n-j}(K))/ε = Φ_{n-j}(K)^{n+1} Φ_{φ,n-j}(K, L)^{-n}``.

    Inconclusive when the quotient noise exceeds the tolerance.
    """

    estimate = first_variation_quermass(K, L, phi, j, eps, samples, seed, projection_directions,
                                        tolerance=tolerances.variation_quermass)
    result = CheckResult.identity(check_id or check_name("quermass.first_variation", K.name, L.name, phi.name, f"j={j}"),
                                  estimate.value, estimate.reference,
                                  abs_tol=tolerances.variation_quermass * abs(estimate.reference),
                                  K=K.name, L=L.name, phi=phi.name, j=j, epsilons=estimate.epsilons,
                                  quotients=estimate.quotients, fitted_order=estimate.fitted_order,
                                  monotone=estimate.monotone, noisy=estimate.noisy,
                                  required_samples=estimate.required_samples, samples=samples, seed=seed)
    if estimate.noisy:
        result.status = CheckStatus.INCONCLUSIVE
    return result


def check_decomposition_identity(K: ConvexBody, L: ConvexBody, phi: OrliczFunction, eps: float,
                                 projections: SampledProjections, directions: DirectionSet | None = None,
                                 tolerances: Tolerances = DEFAULT_TOLERANCES,
                                 *, check_id: str | None = None) -> CheckResult:
    """``1 = (Φ_φ(K_φ, K)/Φ(K_φ))^{-n} + ε(Φ_φ(K_φ, L)/Φ(K_φ))^{-n}`` with ``K_φ = K +_φ εL``.

    ``j = n`` falls back to the volume-level identity.
    """

    n, j = projections.n, projections.j
    if j == n:
        return check_decomposition_volume(K, L, phi, eps, directions, check_id=check_id or check_name(
            "quermass.decomposition", K.name, L.name, phi.name, eps, f"j={j}"))

    combined = orlicz_sum(K, L, CombinationWeights.epsilon(eps), phi)
    volumes = projections.volumes(combined, cache=False)
    weights = volumes ** (-n - 1)
    columns = np.column_stack([
        projections.mixed_volumes(combined, K, phi=phi, cache=False) * weights,
        projections.mixed_volumes(combined, L, phi=phi, cache=False) * weights,
        volumes ** -n,
    ])
    value, stderr = delta_method(columns, lambda m: (m[0] + eps * m[1]) / m[2])
    return CheckResult.identity(check_id or check_name("quermass.decomposition", K.name, L.name, phi.name, eps, f"j={j}"),
                                value, 1.0, stderr=stderr, abs_tol=tolerances.outer_volume, K=K.name, L=L.name,
                                phi=phi.name, eps=eps, j=j, samples=projections.samples, seed=projections.seed)


def _orlicz_minkowski_columns(K, L, phi, projections):
    n = projections.n
    volumes = projections.volumes(K)
    return np.column_stack([
        projections.mixed_volumes(K, L, phi=phi) * volumes ** (-n - 1),
        volumes ** -n,
        projections.volumes(L) ** -n,
    ])


def check_orlicz_minkowski_quermass(K: ConvexBody, L: ConvexBody, phi: OrliczFunction,
                                    projections: SampledProjections, tolerances: Tolerances = DEFAULT_TOLERANCES,
                                    *, check_id: str | None = None) -> CheckResult:
    """``(Φ_{φ,n-j}(K, L)/Φ_{n-j}(K))^{-n} >= φ((Φ_{n-j}(L)/Φ_{n-j}(K))^{1/j})``.

    Both sides are functions of three sample means on shared subspaces. ``j = n`` is the
    volume-level inequality.
    """

    n, j = projections.n, projections.j
    check_id = check_id or check_name("quermass.orlicz_minkowski", K.name, L.name, phi.name, f"j={j}")
    if j == n:
        return check_orlicz_minkowski_volume(K, L, phi, tolerances, check_id=check_id)

    columns = _orlicz_minkowski_columns(K, L, phi, projections)
    lhs, rhs, stderr = _difference(columns, lambda m: m[0] / m[1], lambda m: phi((m[1] / m[2]) ** (1 / (n * j))))
    return CheckResult.inequality(check_id, lhs, rhs, stderr=stderr, abs_tol=tolerances.atom_sum,
                                  stderr_factor=tolerances.stderr_factor, K=K.name, L=L.name, phi=phi.name, j=j,
                                  samples=projections.samples, seed=projections.seed)


def check_orlicz_minkowski_quermass_dilate(K: ConvexBody, phi: OrliczFunction, factor: float,
                                           projections: SampledProjections,
                                           tolerances: Tolerances = DEFAULT_TOLERANCES,
                                           *, check_id: str | None = None) -> CheckResult:
    """Equality of the Orlicz-Minkowski inequality for ``Φ_φ`` when ``L = cK``: both sides equal ``φ(c)``."""

    n, j = projections.n, projections.j
    check_id = check_id or check_name("quermass.orlicz_minkowski_dilate", K.name, phi.name, factor, f"j={j}")
    if j == n:
        return check_orlicz_minkowski_volume_dilate(K, phi, factor, tolerances, check_id=check_id)

    columns = _orlicz_minkowski_columns(K, K.dilate(factor), phi, projections)
    lhs, rhs, stderr = _difference(columns, lambda m: m[0] / m[1], lambda m: phi((m[1] / m[2]) ** (1 / (n * j))))
    return CheckResult.identity(check_id, lhs, rhs, stderr=stderr, abs_tol=1e-9 * _relative(rhs),
                                stderr_factor=tolerances.stderr_factor, K=K.name, phi=phi.name, factor=factor,
                                j=j, samples=projections.samples, seed=projections.seed)


def _orlicz_bm_quermass(K, L, phi, eps, projections):
    n, j = projections.n, projections.j
    combined = orlicz_sum(K, L, CombinationWeights.epsilon(eps), phi)
    columns = np.column_stack([
        projections.volumes(K, exact=False) ** -n,
        projections.volumes(L, exact=False) ** -n,
        projections.volumes(combined, cache=False) ** -n,
    ])
    exponent = 1.0 / (n * j)
    value, stderr = delta_method(
        columns, lambda m: phi((m[2] / m[0]) ** exponent) + eps * phi((m[2] / m[1]) ** exponent))
    return value, stderr


def check_orlicz_bm_quermass(K: ConvexBody, L: ConvexBody, phi: OrliczFunction, eps: float,
                             projections: SampledProjections, directions: DirectionSet | None = None,
                             tolerances: Tolerances = DEFAULT_TOLERANCES,
                             *, check_id: str | None = None) -> CheckResult:
    """``1 >= φ((Φ(K)/Φ(K +_φ εL))^{1/j}) + ε·φ((Φ(L)/Φ(K +_φ εL))^{1/j})`` for ``Φ = Φ_{n-j}``.

    ``j = n`` is the volume-level inequality.
    """

    n, j = projections.n, projections.j
    check_id = check_id or check_name("quermass.orlicz_bm", K.name, L.name, phi.name, eps, f"j={j}")
    if j == n:
        return check_orlicz_bm_volume(K, L, phi, eps, directions, tolerances, check_id=check_id)

    rhs, stderr = _orlicz_bm_quermass(K, L, phi, eps, projections)
    return CheckResult.inequality(check_id, 1.0, rhs, stderr=stderr, abs_tol=tolerances.outer_volume,
                                  stderr_factor=tolerances.stderr_factor, K=K.name, L=L.name, phi=phi.name,
                                  eps=eps, j=j, samples=projections.samples, seed=projections.seed)


def check_orlicz_bm_quermass_dilate(K: ConvexBody, phi: OrliczFunction, eps: float, factor: float,
                                    projections: SampledProjections, directions: DirectionSet | None = None,
                                    tolerances: Tolerances = DEFAULT_TOLERANCES,
                                    *, check_id: str | None = None) -> CheckResult:
    """Equality of the Orlicz-Brunn-Minkowski inequality for ``Φ_{n-j}`` when ``L = cK``."""

    n, j = projections.n, projections.j
    check_id = check_id or check_name("quermass.orlicz_bm_dilate", K.name, phi.name, eps, factor, f"j={j}")
    if j == n:
        return check_orlicz_bm_volume_dilate(K, phi, eps, factor, directions, tolerances, check_id=check_id)

    rhs, stderr = _orlicz_bm_quermass(K, K.dilate(factor), phi, eps, projections)
    return CheckResult.identity(check_id, 1.0, rhs, stderr=stderr, abs_tol=tolerances.outer_volume,
                                stderr_factor=tolerances.stderr_factor, K=K.name, phi=phi.name, eps=eps,
                                factor=factor, j=j, samples=projections.samples, seed=projections.seed)


def check_brunn_minkowski_quermass(K: ConvexBody, L: ConvexBody, projections: SampledProjections,
                                   directions: DirectionSet | None = None,
                                   tolerances: Tolerances = DEFAULT_TOLERANCES,
                                   *, check_id: str | None = None) -> CheckResult:
    """``Φ_{n-j}(K + L)^{1/j} >= Φ_{n-j}(K)^{1/j} + Φ_{n-j}(L)^{1/j}``, normalized to a ratio against ``1``."""

    n, j = projections.n, projections.j
    check_id = check_id or check_name("quermass.brunn_minkowski", K.name, L.name, f"j={j}")
    if j == n:
        return check_brunn_minkowski_volume(K, L, directions, tolerances, check_id=check_id)

    combined = orlicz_sum(K, L, CombinationWeights(), make_power(1.0))
    columns = np.column_stack([
        projections.volumes(K, exact=False) ** -n,
        projections.volumes(L, exact=False) ** -n,
        projections.volumes(combined, cache=False) ** -n,
    ])
    # Φ^{1/j} ∝ mean^{-1/(nj)}; the common factor (ω_n/ω_j)^{1/j} cancels
    exponent = -1.0 / (n * j)
    ratio, stderr = delta_method(columns, lambda m: m[2] ** exponent / (m[0] ** exponent + m[1] ** exponent))
    return CheckResult.inequality(check_id, ratio, 1.0, stderr=stderr, abs_tol=tolerances.outer_volume,
                                  stderr_factor=tolerances.stderr_factor, K=K.name, L=L.name, j=j,
                                  samples=projections.samples, seed=projections.seed)


def limit_ratio_sequence(phi: OrliczFunction, j: int,
                         schedule: Sequence[float] = LIMIT_RATIO_SCHEDULE) -> List[float]:
    """The ratios ``(1 - t)/(1 - φ(t^{1/j}))`` along ``schedule``.

    ``1 - t^{1/j}`` is evaluated without cancellation; should ``1 - φ(t^{1/j})`` still
    vanish numerically, the first-order series ``j/φ′(1⁻)`` is used.
    """

    ratios = []
    for t in schedule:
        gap = 1.0 - t
        root = math.exp(math.log1p(-gap) / j)
        denominator = 1.0 - phi(root)
        if denominator <= 0 or not math.isfinite(denominator):
            log.debug(f"Series fallback for the limit ratio of {phi.name} at t = {t!r}.")
            ratios.append(j / phi.left_derivative_at_1)
        else:
            ratios.append(gap / denominator)
    return ratios


def check_limit_ratio(phi: OrliczFunction, j: int, schedule: Sequence[float] = LIMIT_RATIO_SCHEDULE,
                      tolerances: Tolerances = DEFAULT_TOLERANCES, *, check_id: str | None = None) -> CheckResult:
    """``lim_{t→1⁻} (1 - t)/(1 - φ(t^{1/j})) = j/φ′(1⁻)``, at the last point of ``schedule``."""

    if not all(a < b < 1 for a, b in zip(schedule, schedule[1:])):
        raise ValueError("The schedule must increase towards 1.")
    ratios = limit_ratio_sequence(phi, j, schedule)
    expected = j / phi.left_derivative_at_1
    return CheckResult.identity(check_id or check_name("quermass.limit_ratio", phi.name, f"j={j}"), ratios[-1],
                                expected, abs_tol=tolerances.limit_ratio, phi=phi.name, j=j,
                                schedule=list(schedule), ratios=ratios, monotone=is_monotone(ratios))


def _lutwak_ratio(K: ConvexBody, j: int, samples: int, seed: int) -> Tuple[float, float]:
    """``Φ_{n-j}(K)ⁿ / (ω_n^{n-j} V(K)^j)`` and its stderr."""

    n = K.dim
    estimate = affine_quermassintegral(K, j, samples, seed)
    normalizer = omega(n) ** (n - j) * oracle_volume(K) ** j
    ratio = estimate.value ** n / normalizer
    return ratio, n * ratio * estimate.stderr / estimate.value


def check_lutwak_conjecture(K: ConvexBody, j: int, samples: int, seed: int = 0,
                            *, check_id: str | None = None) -> CheckResult:
    """Probe of ``Φ_{n-j}(K)ⁿ >= ω_n^{n-j} V(K)^j``, with equality for ellipsoids."""

    ratio, stderr = _lutwak_ratio(K, j, samples, seed)
    return _probe(check_id or check_name("quermass.lutwak_conjecture", K.name, f"j={j}"), ratio, stderr, 1e-9,
                  lambda: _lutwak_ratio(K, j, 10 * samples, seed), K=K.name, j=j, samples=samples, seed=seed)


def _lutwak_chain_columns(K: ConvexBody, j: int, k: int, samples: int, seed: int) -> np.ndarray:
    """Per-sample ``Vol_j(K|ξ)^{-n}`` and ``Vol_k(K|η)^{-n}`` with ``ξ`` spanned by the first
    ``j`` columns of the basis of ``η``.
    """

    n = K.dim
    if k == n:
        bases = haar_bases(n, j, samples, seed)
        low = np.concatenate([ProjectionBatch(K, bases[start:start + BLOCK_SIZE]).volumes
                              for start in range(0, samples, BLOCK_SIZE)])
        return np.column_stack([low ** -n, np.full(samples, oracle_volume(K) ** -n)])

    bases = haar_bases(n, k, samples, seed)
    low, high = [], []
    for start in range(0, samples, BLOCK_SIZE):
        block = bases[start:start + BLOCK_SIZE]
        low.append(ProjectionBatch(K, block[:, :, :j]).volumes)
        high.append(ProjectionBatch(K, block).volumes)
    return np.column_stack([np.concatenate(low) ** -n, np.concatenate(high) ** -n])


def _lutwak_chain_ratio(K: ConvexBody, j: int, k: int, samples: int, seed: int) -> Tuple[float, float]:
    """``ω_n^{n-k} Φ_{n-j}(K)^k / (ω_n^{n-j} Φ_{n-k}(K)^j)`` and its stderr."""

    n = K.dim
    columns = _lutwak_chain_columns(K, j, k, samples, seed)
    scale = (omega(n) ** (n - k) * (omega(n) / omega(j)) ** k) / (omega(n) ** (n - j) * (omega(n) / omega(k)) ** j)
    return delta_method(columns, lambda m: scale * m[0] ** (-k / n) * m[1] ** (j / n))


def check_lutwak_chain(K: ConvexBody, j: int, k: int, samples: int, seed: int = 0,
                       *, check_id: str | None = None) -> CheckResult:
    """Probe of ``ω_n^{n-k} Φ_{n-j}(K)^k >= ω_n^{n-j} Φ_{n-k}(K)^j`` for ``0 < j < k <= n``."""

    if not 0 < j < k <= K.dim:
        raise ValueError(f"Expected 0 < j < k <= n, got {j=}, {k=}, n={K.dim}.")
    ratio, stderr = _lutwak_chain_ratio(K, j, k, samples, seed)
    return _probe(check_id or check_name("quermass.lutwak_chain", K.name, f"j={j}", f"k={k}"), ratio, stderr, 1e-9,
                  lambda: _lutwak_chain_ratio(K, j, k, 10 * samples, seed), K=K.name, j=j, k=k, samples=samples,
                  seed=seed)
