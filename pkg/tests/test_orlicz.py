import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quermass.components.bodies import DirectionSet, Ellipsoid, LinearMap
from quermass.components.common import DimensionMismatchException, InvalidOrliczFunctionException
from quermass.components.grassmannian import Subspace, haar_bases
from quermass.components.orlicz import (
    CombinationWeights,
    OrliczFunction,
    OrliczSum,
    check_orlicz_sum_linear_image,
    check_orlicz_sum_projection,
    dilate_factor,
    make_normalized_exp,
    make_phi,
    make_power,
    orlicz_sum,
    solve_orlicz_support,
)
from quermass.data.models import ExpPhiSpec, PowerPhiSpec
from quermass.harness.corpus import cube, random_polytope


supports = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False, allow_infinity=False)
coefficients = st.floats(min_value=1e-2, max_value=1e2, allow_nan=False, allow_infinity=False)
exponents = st.floats(min_value=1.0, max_value=6.0)
rates = st.floats(min_value=0.05, max_value=5.0)


class TestOrliczFunction:

    def test_power(self):
        phi = make_power(2)
        assert phi.name == "power2"
        assert phi(3.0) == 9.0
        assert isinstance(phi(3.0), float)
        assert np.allclose(phi(np.array([0.5, 2.0])), [0.25, 4.0])
        assert phi.inverse(4.0) == pytest.approx(2.0)
        assert phi.left_derivative_at_1 == 2.0
        assert phi.strictly_convex
        assert not make_power(1).strictly_convex

    def test_power_below_one(self):
        with pytest.raises(ValueError):
            make_power(0.5)

    def test_normalized_exp(self):
        phi = make_normalized_exp(1.0)
        assert phi.name == "exp1"
        assert phi(0.0) == 0.0
        assert phi(1.0) == pytest.approx(1.0)
        assert phi.left_derivative_at_1 == pytest.approx(math.e / (math.e - 1))
        assert phi.inverse(phi(0.7)) == pytest.approx(0.7)

    def test_make_phi(self):
        assert make_phi(PowerPhiSpec(family="power", p=3)).name == "power3"
        assert make_phi(ExpPhiSpec(family="exp", alpha=1.5)).name == "exp1.5"

    def test_custom_function_uses_bisection_inverse(self):
        phi = OrliczFunction("cube_plus_linear", lambda t: (t ** 3 + t) / 2, 2.0, True)
        assert phi.inverse(5.0) == pytest.approx(2.0)
        with pytest.raises(ValueError):
            phi.inverse(-1.0)

    @pytest.mark.parametrize("evaluator, derivative", [
        (np.sqrt, 0.5),
        (lambda t: 2 * t, 2.0),
        (lambda t: t + 0.1, 1.0),
        (lambda t: np.where(t < 1, t ** 2, 2 - t), 2.0),
        (lambda t: t ** 2, 3.0),
    ])
    def test_class_violations(self, evaluator, derivative):
        with pytest.raises(InvalidOrliczFunctionException):
            OrliczFunction("bad", evaluator, derivative, False)


class TestSolver:

    @settings(max_examples=200, deadline=None)
    @given(hK=supports, hL=supports, a=coefficients, b=coefficients, p=exponents)
    def test_power_closed_form(self, hK, hL, a, b, p):
        lam = solve_orlicz_support(hK, hL, CombinationWeights(a, b), make_power(p))
        exact = (a * hK ** p + b * hL ** p) ** (1 / p)
        assert lam == pytest.approx(exact, rel=1e-10)

    @settings(max_examples=200, deadline=None)
    @given(hK=supports, hL=supports, a=coefficients, b=coefficients, alpha=rates)
    def test_residual(self, hK, hL, a, b, alpha):
        phi = make_normalized_exp(alpha)
        lam = solve_orlicz_support(hK, hL, CombinationWeights(a, b), phi)
        assert a * phi(hK / lam) + b * phi(hL / lam) == pytest.approx(1.0, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(hK=supports, hL=supports, eps=st.floats(min_value=1e-3, max_value=10.0), alpha=rates)
    def test_monotone_in_both_supports(self, hK, hL, eps, alpha):
        phi = make_normalized_exp(alpha)
        w = CombinationWeights.epsilon(eps)
        base = solve_orlicz_support(hK, hL, w, phi)
        assert solve_orlicz_support(1.5 * hK, hL, w, phi) >= base * (1 - 1e-12)
        assert solve_orlicz_support(hK, 1.5 * hL, w, phi) >= base * (1 - 1e-12)

    def test_vectorised(self):
        hK = np.array([1.0, 2.0, 3.0])
        lam = solve_orlicz_support(hK, 1.0, CombinationWeights(), make_power(1))
        assert lam.shape == (3,)
        assert np.allclose(lam, hK + 1.0)

    @pytest.mark.parametrize("hK, hL", [(0.0, 1.0), (1.0, -2.0)])
    def test_non_positive_supports(self, hK, hL):
        with pytest.raises(ValueError):
            solve_orlicz_support(hK, hL, CombinationWeights(), make_power(1))

    def test_weights_must_be_positive(self):
        with pytest.raises(ValueError):
            CombinationWeights(1.0, 0.0)


class TestOrliczSum:

    def test_minkowski_sum_of_squares(self, square):
        combined = orlicz_sum(square, square, CombinationWeights(), make_power(1))
        assert combined.support([1.0, 0.0]) == pytest.approx(2.0)
        assert combined.name == "square+[power1,1]square"

    def test_lp_sum_of_square_and_disk(self, square, disk):
        combined = orlicz_sum(square, disk, CombinationWeights.epsilon(0.5), make_power(2))
        assert combined.support([1.0, 0.0]) == pytest.approx(math.sqrt(1.5))

    def test_radii_bound_the_support(self, triangle, ellipse, phi):
        combined = orlicz_sum(triangle, ellipse, CombinationWeights.epsilon(0.3), phi)
        values = combined.support(DirectionSet.uniform(2, 256))
        assert values.min() >= combined.inradius * (1 - 1e-12)
        assert values.max() <= combined.circumradius * (1 + 1e-12)

    def test_sum_is_convex(self, triangle, ellipse, phi):
        assert orlicz_sum(triangle, ellipse, CombinationWeights.epsilon(0.7), phi).is_sublinear()

    def test_dimension_mismatch(self, square, cube3):
        with pytest.raises(DimensionMismatchException):
            OrliczSum(square, cube3, CombinationWeights(), make_power(1))

    @pytest.mark.parametrize("phi", [make_power(1), make_power(2.5), make_normalized_exp(2.0)], ids=lambda phi: phi.name)
    def test_dilate_factor(self, square, phi):
        w = CombinationWeights(1.0, 0.6)
        combined = orlicz_sum(square, square, w, phi)
        u = DirectionSet.uniform(2, 64)
        assert np.allclose(combined.support(u), dilate_factor(w, phi) * square.support(u), rtol=1e-10)

    def test_dilate_factor_of_lp(self):
        assert dilate_factor(CombinationWeights(), make_power(2)) == pytest.approx(math.sqrt(2))

    def test_sum_with_a_sum(self, square, disk):
        inner = orlicz_sum(square, disk, CombinationWeights.epsilon(0.5), make_power(2))
        outer = orlicz_sum(inner, square, CombinationWeights.epsilon(0.5), make_power(2))
        assert outer.support([1.0, 0.0]) == pytest.approx(math.sqrt(2.0))


class TestProjectionAndLinearImage:

    @pytest.mark.parametrize("j", [1, 2])
    def test_projection(self, phi, j):
        K, L = random_polytope(3, 0), Ellipsoid(np.diag([1.0, 4.0, 9.0]))
        for basis in haar_bases(3, j, 5, seed=4):
            assert check_orlicz_sum_projection(K, L, 0.4, phi, Subspace(basis))

    def test_projection_in_four_dimensions(self, phi):
        K, L = cube(4), random_polytope(4, 1)
        basis = haar_bases(4, 3, 1, seed=0)[0]
        assert check_orlicz_sum_projection(K, L, 1.0, phi, Subspace(basis))

    def test_linear_image(self, phi):
        T = LinearMap(1.7 * LinearMap.random_special(3, np.random.default_rng(0)).matrix)
        assert check_orlicz_sum_linear_image(random_polytope(3, 2), cube(3), 0.3, phi, T)

    def test_linear_image_of_sum_is_sum_of_images(self, square, disk):
        T = LinearMap([[1.0, 0.5], [0.0, 2.0]])
        combined = orlicz_sum(square, disk, CombinationWeights.epsilon(0.2), make_power(3))
        image = combined.apply_linear(T)
        assert isinstance(image, OrliczSum)
        assert image.K.name == "square"
