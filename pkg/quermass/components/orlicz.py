"""Orlicz functions and the Orlicz linear combination of two bodies.

For ``φ ∈ 𝒞`` and weights ``a, b > 0`` the Orlicz combination ``a·K +_φ b·L`` is the
body whose support function ``λ(u)`` solves

    ``a·φ(h_K(u)/λ) + b·φ(h_L(u)/λ) = 1``.

The left side is strictly decreasing in ``λ``, so :func:`solve_orlicz_support` finds
``λ`` by bisection.
"""

from typing import Callable, Union
import logging
import math

import numpy as np

from quermass.components.bodies import ConvexBody, DirectionSet, LinearMap, SupportOracle
from quermass.components.common import DimensionMismatchException, InvalidOrliczFunctionException
from quermass.data.models import ExpPhiSpec, PhiSpec, PowerPhiSpec
from quermass.utils import assertions


log = logging.getLogger(__name__)


#: Residual at which the bisection stops early.
RESIDUAL_TOLERANCE = 1e-13
#: Upper bound on bisection steps; the bracket reaches float resolution well before.
MAX_ITERATIONS = 200

_CLASS_TOLERANCE = 1e-12

ArrayLike = Union[float, np.ndarray]


class OrliczFunction:
    """A member ``φ`` of the class 𝒞 of increasing convex functions with ``φ(0) = 0``, ``φ(1) = 1``.

    Instances are immutable and callable on scalars and arrays.

    :param name: Identifier used in check ids, e.g. ``power2``.
    :param evaluator: Vectorised function on ``[0, ∞)``.
    :param left_derivative_at_1: ``φ′(1⁻)``.
    :param strictly_convex: Whether ``φ`` is strictly convex.
    :param inverse: Optional closed-form inverse; a bisection is used otherwise.
    :param validate: Run the sampled class-𝒞 checks. Built-in families skip them.
    :raises: :class:`~quermass.components.common.InvalidOrliczFunctionException` if a check fails.
    """

    def __init__(
        self,
        name: str,
        evaluator: Callable[[np.ndarray], np.ndarray],
        left_derivative_at_1: float,
        strictly_convex: bool,
        inverse: Callable[[np.ndarray], np.ndarray] | None = None,
        validate: bool = True,
    ):
        assertions.assert_is_nonempty_string(name)
        assertions.assert_is_callable(evaluator)
        assertions.assert_is_positive(left_derivative_at_1)
        assertions.assert_is_bool(strictly_convex)
        if inverse is not None:
            assertions.assert_is_callable(inverse)

        #: Identifier, e.g. ``power2`` or ``exp1``.
        self.name: str = name
        #: ``φ′(1⁻)``.
        self.left_derivative_at_1: float = float(left_derivative_at_1)
        #: Whether ``φ`` is strictly convex (equality cases of the Orlicz inequalities need it).
        self.strictly_convex: bool = bool(strictly_convex)

        self._evaluator = evaluator
        self._inverse = inverse

        if validate:
            self._check_class()


    def __call__(self, t: ArrayLike) -> ArrayLike:
        with np.errstate(over="ignore"):
            values = self._evaluator(np.asarray(t, dtype=float))
        return float(values) if np.ndim(values) == 0 else values


    def inverse(self, y: ArrayLike) -> ArrayLike:
        """Returns ``φ⁻¹(y)`` for ``y >= 0``.

        Uses the closed form when available, otherwise a vectorised bisection.
        """

        y = np.asarray(y, dtype=float)
        if np.any(y < 0):
            raise ValueError("φ⁻¹ is only defined on [0, ∞).")
        if self._inverse is not None:
            values = self._inverse(y)
        else:
            values = self._bisect_inverse(y)
        return float(values) if np.ndim(values) == 0 else values


    def _bisect_inverse(self, y: np.ndarray) -> np.ndarray:
        lo = np.zeros_like(y)
        hi = np.ones_like(y)
        while np.any(self(hi) < y):
            hi = np.where(self(hi) < y, 2 * hi, hi)
        for _ in range(MAX_ITERATIONS):
            mid = 0.5 * (lo + hi)
            below = self(mid) < y
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
            if np.all(hi - lo <= np.spacing(hi)):
                break
        return 0.5 * (lo + hi)


    def _check_class(self) -> None:
        def fail(reason: str):
            log.error(f"Rejected Orlicz function {self.name!r}: {reason}")
            raise InvalidOrliczFunctionException(f"{self.name}: {reason}")

        if abs(self(0.0)) > _CLASS_TOLERANCE:
            fail(f"φ(0) = {self(0.0)!r}, expected 0.")
        if abs(self(1.0) - 1.0) > _CLASS_TOLERANCE:
            fail(f"φ(1) = {self(1.0)!r}, expected 1.")

        grid = np.linspace(0.0, 4.0, 401)
        values = self(grid)
        if not np.all(np.isfinite(values)):
            fail("φ is not finite on [0, 4].")
        if np.any(np.diff(values) < -_CLASS_TOLERANCE):
            fail("φ is not increasing.")

        s, t = np.meshgrid(grid[::8], grid[::8])
        midpoint = self((s + t) / 2)
        chord = (self(s) + self(t)) / 2
        if np.any(midpoint > chord + _CLASS_TOLERANCE * np.maximum(1.0, chord)):
            fail("φ fails the midpoint convexity test.")

        steps = np.array([1e-3, 1e-4, 1e-5])
        quotients = (1.0 - self(1.0 - steps)) / steps
        errors = np.abs(quotients - self.left_derivative_at_1)
        if errors[-1] > 1e-3 * max(1.0, self.left_derivative_at_1):
            fail(f"declared φ′(1⁻) = {self.left_derivative_at_1} does not match the "
                 f"difference quotient {quotients[-1]:.8g}.")


    def __repr__(self):
        return f"<OrliczFunction({self.name})>"


def make_power(p: float) -> OrliczFunction:
    """Returns ``φ(t) = t^p`` (``L_p`` case).

    :param p: Exponent, at least ``1``.
    :raises: :class:`ValueError` if ``p < 1``.
    """

    assertions.assert_is_float_or_int(p)
    if p < 1:
        raise ValueError(f"φ(t) = t^p is only convex for p >= 1, got {p=}.")
    p = float(p)
    return OrliczFunction(
        name=f"power{p:g}",
        evaluator=lambda t: np.power(t, p),
        left_derivative_at_1=p,
        strictly_convex=p > 1,
        inverse=lambda y: np.power(y, 1.0 / p),
        validate=False,
    )


def make_normalized_exp(alpha: float) -> OrliczFunction:
    """Returns ``φ(t) = (e^{αt} - 1) / (e^α - 1)``, strictly convex for every ``α > 0``.

    :raises: :class:`ValueError` if ``alpha <= 0``.
    """

    assertions.assert_is_positive(alpha)
    alpha = float(alpha)
    scale = math.expm1(alpha)
    return OrliczFunction(
        name=f"exp{alpha:g}",
        evaluator=lambda t: np.expm1(alpha * t) / scale,
        left_derivative_at_1=alpha * math.exp(alpha) / scale,
        strictly_convex=True,
        inverse=lambda y: np.log1p(y * scale) / alpha,
        validate=False,
    )


def make_phi(spec: PhiSpec) -> OrliczFunction:
    """Builds the Orlicz function selected by a validated φ specification."""

    if isinstance(spec, PowerPhiSpec):
        return make_power(spec.p)
    if isinstance(spec, ExpPhiSpec):
        return make_normalized_exp(spec.alpha)
    raise TypeError(f"Unknown φ specification {type(spec)}.")


class CombinationWeights:
    """The coefficients ``a, b > 0`` of ``a·K +_φ b·L``.

    :raises: :class:`ValueError` if a coefficient is not positive.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: float = 1.0, b: float = 1.0):
        assertions.assert_is_positive(a)
        assertions.assert_is_positive(b)
        self.a: float = float(a)
        self.b: float = float(b)


    @classmethod
    def epsilon(cls, eps: float) -> 'CombinationWeights':
        """Returns the weights of ``K +_φ ε·L``."""

        return cls(1.0, eps)


    def __repr__(self):
        return f"<CombinationWeights(a={self.a:g}, b={self.b:g})>"


def solve_orlicz_support(hK: ArrayLike, hL: ArrayLike, w: CombinationWeights, phi: OrliczFunction) -> ArrayLike:
    """Solves ``a·φ(hK/λ) + b·φ(hL/λ) = 1`` for ``λ > 0``, elementwise.

    The bracket ``[min(hK, hL, a·hK + b·hL), max(hK, hL, a·hK + b·hL)]`` always contains
    the root, as ``φ(t) <= t`` on ``[0, 1]`` and ``φ(t) >= t`` for ``t >= 1``.

    :param hK: Positive support value(s) of the first body.
    :param hL: Positive support value(s) of the second body, broadcastable with ``hK``.
    :return: ``λ`` with the broadcast shape of the inputs; a float for scalar inputs.
    :raises: :class:`ValueError` if a support value is not positive.
    """

    hK = np.asarray(hK, dtype=float)
    hL = np.asarray(hL, dtype=float)
    if np.any(hK <= 0) or np.any(hL <= 0):
        raise ValueError("Support values must be positive.")
    hK, hL = np.broadcast_arrays(hK, hL)
    scalar = hK.ndim == 0
    hK, hL = np.atleast_1d(hK), np.atleast_1d(hL)

    linear = w.a * hK + w.b * hL
    lo = np.minimum(np.minimum(hK, hL), linear)
    hi = np.maximum(np.maximum(hK, hL), linear)

    def residual(lam):
        return w.a * phi(hK / lam) + w.b * phi(hL / lam) - 1.0

    result = np.full_like(hK, np.nan)
    settled = np.zeros(hK.shape, dtype=bool)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(MAX_ITERATIONS):
            mid = 0.5 * (lo + hi)
            r = residual(mid)
            hit = ~settled & (np.abs(r) <= RESIDUAL_TOLERANCE)
            result[hit] = mid[hit]
            settled |= hit
            lo = np.where(r > 0, mid, lo)
            hi = np.where(r > 0, hi, mid)
            if np.all(settled | (hi - lo <= np.spacing(hi))):
                break
    result = np.where(settled, result, 0.5 * (lo + hi))
    return float(result[0]) if scalar else result.reshape(hK.shape)


def dilate_factor(w: CombinationWeights, phi: OrliczFunction) -> float:
    """Returns ``c`` with ``a·K +_φ b·K = c·K``, namely ``1 / φ⁻¹(1/(a + b))``."""

    return 1.0 / phi.inverse(1.0 / (w.a + w.b))


class OrliczSum(SupportOracle):
    """The Orlicz linear combination ``a·K +_φ b·L`` as a support-function oracle.

    Its inradius and circumradius follow from monotonicity of the solution in ``hK`` and
    ``hL``: they are the solutions for the inradii and circumradii of the summands.

    :raises: :class:`~quermass.components.common.DimensionMismatchException` if ``K`` and
        ``L`` live in different dimensions.
    """

    def __init__(self, K: ConvexBody, L: ConvexBody, w: CombinationWeights, phi: OrliczFunction):
        if K.dim != L.dim:
            raise DimensionMismatchException(f"Cannot combine bodies in R^{K.dim} and R^{L.dim}.")

        #: First summand.
        self.K: ConvexBody = K
        #: Second summand.
        self.L: ConvexBody = L
        self.weights: CombinationWeights = w
        self.phi: OrliczFunction = phi

        super().__init__(
            function=self._combined_support,
            dim=K.dim,
            inradius=solve_orlicz_support(K.inradius, L.inradius, w, phi),
            lipschitz=solve_orlicz_support(K.circumradius, L.circumradius, w, phi),
            name=f"{K.name}+[{phi.name},{w.b:g}]{L.name}",
        )


    def _combined_support(self, directions: np.ndarray) -> np.ndarray:
        return solve_orlicz_support(self.K._support(directions), self.L._support(directions), self.weights, self.phi)


    def apply_linear(self, T: LinearMap) -> 'OrliczSum':
        """Returns ``TK +_φ TL``, which is ``T(a·K +_φ b·L)``."""

        self._check_linear(T)
        return OrliczSum(self.K.apply_linear(T), self.L.apply_linear(T), self.weights, self.phi)


    def project(self, subspace) -> 'OrliczSum':
        """Returns ``K|ξ +_φ L|ξ``, which is ``(a·K +_φ b·L)|ξ``."""

        self._check_subspace(subspace)
        return OrliczSum(self.K.project(subspace), self.L.project(subspace), self.weights, self.phi)


def orlicz_sum(K: ConvexBody, L: ConvexBody, w: CombinationWeights, phi: OrliczFunction) -> OrliczSum:
    """Returns ``a·K +_φ b·L``.

    :raises: :class:`~quermass.components.common.DimensionMismatchException` on a dimension mismatch.
    """

    return OrliczSum(K, L, w, phi)


def orlicz_sum_projection_gap(
    K: ConvexBody,
    L: ConvexBody,
    eps: float,
    phi: OrliczFunction,
    subspace,
    directions: DirectionSet | None = None,
) -> float:
    """Largest support gap between ``(K +_φ ε·L)|ξ`` and ``K|ξ +_φ ε·(L|ξ)``.

    The first body restricts the support function of the sum to ``ξ``; the second
    combines the projections.

    :param subspace: A :class:`~quermass.components.grassmannian.Subspace`.
    :param directions: Directions in the coordinates of ``ξ``; uniform by default.
    """

    w = CombinationWeights.epsilon(eps)
    restricted = SupportOracle.project(orlicz_sum(K, L, w, phi), subspace)
    combined = orlicz_sum(K.project(subspace), L.project(subspace), w, phi)
    directions = directions or DirectionSet.uniform(restricted.dim, 1024)
    return float(np.abs(restricted.support(directions) - combined.support(directions)).max())


def check_orlicz_sum_projection(
    K: ConvexBody,
    L: ConvexBody,
    eps: float,
    phi: OrliczFunction,
    subspace,
    directions: DirectionSet | None = None,
    tolerance: float = 1e-9,
) -> bool:
    """Checks ``(K +_φ ε·L)|ξ = K|ξ +_φ ε·(L|ξ)`` on directions inside ``ξ``.

    :return: ``True`` iff the support functions agree within ``tolerance``.
    """

    gap = orlicz_sum_projection_gap(K, L, eps, phi, subspace, directions)
    log.debug(f"Projection gap {gap:.3e} for {K.name}, {L.name}, {phi.name}, eps={eps:g}.")
    return gap <= tolerance


def orlicz_sum_linear_image_gap(
    K: ConvexBody,
    L: ConvexBody,
    eps: float,
    phi: OrliczFunction,
    T: LinearMap,
    directions: DirectionSet | None = None,
) -> float:
    """Largest relative support gap between ``T(K +_φ ε·L)``, by the adjoint rule, and ``TK +_φ ε·TL``."""

    combined = orlicz_sum(K, L, CombinationWeights.epsilon(eps), phi)
    adjoint = SupportOracle.apply_linear(combined, T)
    image = combined.apply_linear(T)
    directions = directions or DirectionSet.uniform(K.dim, 1024)
    expected = adjoint.support(directions)
    return float((np.abs(image.support(directions) - expected) / expected).max())


def check_orlicz_sum_linear_image(
    K: ConvexBody,
    L: ConvexBody,
    eps: float,
    phi: OrliczFunction,
    T: LinearMap,
    directions: DirectionSet | None = None,
    tolerance: float = 1e-9,
) -> bool:
    """Checks ``T(K +_φ ε·L) = TK +_φ ε·TL``.

    :return: ``True`` iff the relative support gap is within ``tolerance``.
    """

    return orlicz_sum_linear_image_gap(K, L, eps, phi, T, directions) <= tolerance
