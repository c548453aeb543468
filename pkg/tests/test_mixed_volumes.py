import math

import numpy as np
import pytest

from quermass.components.bodies import DirectionSet, Ellipsoid, Polytope, oracle_of
from quermass.components.common import (
    DimensionMismatchException,
    UnboundedIntersectionException,
    UnsupportedBodyException,
)
from quermass.components.mixed_volumes import (
    SurfaceMeasure,
    default_direction_count,
    first_variation_volume,
    lp_mixed_volume,
    mixed_volume_V1,
    oracle_volume,
    orlicz_mixed_volume,
    outer_polytope,
    surface_area,
    surface_area_measure,
    volume,
)
from quermass.components.orlicz import CombinationWeights, make_normalized_exp, make_power, orlicz_sum
from quermass.harness.corpus import cross_polytope, cube, random_polytope, simplex


class TestSurfaceMeasure:

    @pytest.mark.parametrize("P", [cube(2), cube(3), cube(4), simplex(3), cross_polytope(4), random_polytope(3, 1)],
                             ids=lambda P: P.name)
    def test_closed(self, P):
        measure = surface_area_measure(P)
        assert measure.closure_residual < 1e-9 * measure.total

    def test_cube_surface_area(self, cube3):
        measure = surface_area_measure(cube3)
        assert len(measure) == 6
        assert surface_area(cube3) == pytest.approx(24.0)

    def test_integrate(self, square):
        measure = surface_area_measure(square)
        assert measure.integrate(np.ones(len(measure))) == pytest.approx(8.0)

    def test_unclosed_measure(self):
        with pytest.raises(ValueError):
            SurfaceMeasure(np.array([[1.0, 0.0], [0.0, 1.0]]), np.array([1.0, 1.0]))

    def test_non_positive_weights(self):
        with pytest.raises(ValueError):
            SurfaceMeasure(np.array([[1.0, 0.0], [-1.0, 0.0]]), np.array([1.0, 0.0]))

    def test_needs_a_polytope(self, disk):
        with pytest.raises(UnsupportedBodyException):
            surface_area_measure(disk)


class TestVolume:

    @pytest.mark.parametrize("P, expected", [
        (cube(2), 4.0),
        (cube(3), 8.0),
        (cube(4), 16.0),
        (simplex(3), 1 / 6),
        (cross_polytope(3), 4 / 3),
        (cross_polytope(4), 2 / 3),
        (Polytope([[-1.0], [2.0]]), 3.0),
    ])
    def test_polytopes(self, P, expected):
        assert volume(P) == pytest.approx(expected, rel=1e-12)

    def test_atom_sum_matches_hull(self):
        P = random_polytope(4, 3)
        assert volume(P) == pytest.approx(P.hull_volume, rel=1e-9)

    def test_ellipsoid(self, ellipse):
        assert volume(ellipse) == pytest.approx(2 * math.pi)

    def test_oracle_needs_outer_polytope(self, disk):
        with pytest.raises(UnsupportedBodyException):
            volume(oracle_of(disk))
        assert oracle_volume(oracle_of(disk), DirectionSet.uniform(2, 2048)) == pytest.approx(math.pi, rel=1e-5)


class TestMixedVolumes:

    def test_self_mixed_volume(self, triangle):
        assert mixed_volume_V1(triangle, triangle) == pytest.approx(volume(triangle))

    def test_square_with_disk(self, square, disk):
        assert mixed_volume_V1(square, disk) == pytest.approx(4.0)
        assert orlicz_mixed_volume(square, disk, make_power(2)) == pytest.approx(4.0)

    def test_square_with_rectangle(self, square, rectangle):
        # h_rectangle is 2 at (±1, 0) and 1 at (0, ±1)
        assert mixed_volume_V1(square, rectangle) == pytest.approx(6.0)
        assert lp_mixed_volume(square, rectangle, 2) == pytest.approx(10.0)

    def test_vphi_self_and_dilates(self, triangle, phi):
        V = volume(triangle)
        assert orlicz_mixed_volume(triangle, triangle, phi) == pytest.approx(V, rel=1e-12)
        assert orlicz_mixed_volume(triangle, triangle.dilate(2.0), phi) == pytest.approx(phi(2.0) * V, rel=1e-12)

    @pytest.mark.parametrize("p", [1, 1.5, 2, 3])
    def test_lp_is_power_phi(self, p):
        K, L = random_polytope(3, 0), Ellipsoid(np.diag([1.0, 4.0, 9.0]))
        assert lp_mixed_volume(K, L, p) == pytest.approx(orlicz_mixed_volume(K, L, make_power(p)), rel=1e-12)

    def test_minkowski_inequality(self):
        K, L = random_polytope(3, 0), random_polytope(3, 1)
        assert mixed_volume_V1(K, L) ** 3 >= volume(K) ** 2 * volume(L)

    def test_invalid_arguments(self, square, disk, cube3):
        with pytest.raises(ValueError):
            lp_mixed_volume(square, disk, 0.5)
        with pytest.raises(UnsupportedBodyException):
            orlicz_mixed_volume(disk, square, make_power(1))
        with pytest.raises(DimensionMismatchException):
            mixed_volume_V1(square, cube3)


class TestOuterPolytope:

    def test_contains_the_body(self, disk):
        directions = DirectionSet.uniform(2, 64)
        outer = outer_polytope(disk, directions)
        assert np.all(outer.support(DirectionSet.uniform(2, 1000)) >= 1.0 - 1e-12)
        assert volume(outer) == pytest.approx(64 * math.tan(math.pi / 64))

    def test_polytope_is_recovered(self, square):
        outer = outer_polytope(oracle_of(square), DirectionSet.uniform(2, 4))
        assert volume(outer) == pytest.approx(4.0)

    def test_line(self):
        segment = Polytope([[-1.0], [2.0]])
        assert volume(outer_polytope(oracle_of(segment))) == pytest.approx(3.0)

    def test_unbounded(self, square):
        half = DirectionSet(np.array([[1.0, 0.0], [0.0, 1.0], [math.sqrt(0.5), math.sqrt(0.5)]]))
        with pytest.raises(UnboundedIntersectionException):
            outer_polytope(square, half)

    def test_dimension_mismatch(self, square):
        with pytest.raises(DimensionMismatchException):
            outer_polytope(square, DirectionSet.uniform(3, 10))

    def test_default_counts(self):
        assert default_direction_count(2) == 8192
        assert default_direction_count(4) == 32768


class TestFirstVariation:

    @pytest.mark.parametrize("phi", [make_power(1), make_power(2), make_normalized_exp(1.0)], ids=lambda phi: phi.name)
    def test_square_and_triangle(self, square, triangle, phi):
        estimate = first_variation_volume(square, triangle, phi, directions=DirectionSet.uniform(2, 4096))
        assert estimate.relative_error < 0.03
        assert estimate.epsilons == [0.08, 0.04, 0.02, 0.01, 0.005]

    def test_ball_and_cube(self, cube3):
        estimate = first_variation_volume(Ellipsoid.ball(1.0, 3), cube3.dilate(0.5), make_power(2))
        assert estimate.relative_error < 0.03

    def test_minkowski_sum_is_linear(self, square, rectangle):
        # V(K + εL) is a polynomial in ε; the quotients move linearly
        estimate = first_variation_volume(square, rectangle, make_power(1), directions=DirectionSet.uniform(2, 8))
        assert estimate.value == pytest.approx(6.0, rel=1e-9)
        assert estimate.fitted_order == pytest.approx(1.0, abs=1e-6)

    def test_step_validation(self, square, triangle):
        with pytest.raises(ValueError):
            first_variation_volume(square, triangle, make_power(1), eps=[0.01, 0.02])
        with pytest.raises(ValueError):
            first_variation_volume(square, triangle, make_power(1), eps=[0.01, 1e-5])


def test_decomposition_on_outer_polytope(square, disk, phi):
    eps = 0.3
    A = outer_polytope(orlicz_sum(square, disk, CombinationWeights.epsilon(eps), phi), DirectionSet.uniform(2, 512))
    lhs = orlicz_mixed_volume(A, square, phi) + eps * orlicz_mixed_volume(A, disk, phi)
    assert lhs == pytest.approx(volume(A), rel=1e-6)
