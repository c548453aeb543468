import math

import numpy as np
import pytest
from scipy import stats

from quermass.components.bodies import Ellipsoid, LinearMap
from quermass.components.common import DimensionMismatchException, UnsupportedBodyException
from quermass.components.grassmannian import (
    BLOCK_SIZE,
    ProjectionBatch,
    Subspace,
    affine_quermassintegral,
    alternative_orlicz_mixed_affine_quermassintegral,
    first_variation_quermass,
    haar_bases,
    lp_mixed_affine_quermassintegral,
    mixed_affine_quermassintegral,
    omega,
    orlicz_mixed_affine_quermassintegral,
    sample_haar,
)
from quermass.components.mixed_volumes import orlicz_mixed_volume, volume
from quermass.components.orlicz import make_power
from quermass.harness.corpus import ball, cube, random_polytope, simplex


SAMPLES = 2000


class TestOmega:

    @pytest.mark.parametrize("k, expected", [(0, 1.0), (1, 2.0), (2, math.pi), (3, 4 * math.pi / 3),
                                             (4, math.pi ** 2 / 2)])
    def test_values(self, k, expected):
        assert omega(k) == pytest.approx(expected, rel=1e-14)

    def test_invalid(self):
        with pytest.raises(ValueError):
            omega(-1)
        with pytest.raises(TypeError):
            omega(2.0)


class TestSubspace:

    def test_vector_basis(self):
        xi = Subspace([0.0, 1.0, 0.0])
        assert (xi.n, xi.j) == (3, 1)
        assert np.allclose(xi.coordinates(np.array([[1.0, 2.0, 3.0]])), [[2.0]])
        assert np.allclose(xi.embed(np.array([[2.0]])), [[0.0, 2.0, 0.0]])

    def test_rejects_non_orthonormal(self):
        with pytest.raises(ValueError):
            Subspace([[1.0, 1.0], [0.0, 1.0], [0.0, 0.0]])

    def test_sample_haar(self):
        xi = sample_haar(4, 2, np.random.default_rng(0))
        assert np.allclose(xi.basis.T @ xi.basis, np.eye(2))
        with pytest.raises(ValueError):
            sample_haar(2, 3, np.random.default_rng(0))


class TestHaarBases:

    def test_shape_and_orthonormality(self):
        bases = haar_bases(4, 3, 100, seed=1)
        assert bases.shape == (100, 4, 3)
        gram = np.transpose(bases, (0, 2, 1)) @ bases
        assert np.allclose(gram, np.eye(3), atol=1e-12)

    def test_reproducible(self):
        assert np.array_equal(haar_bases(3, 2, 500, seed=9), haar_bases(3, 2, 500, seed=9))
        assert not np.array_equal(haar_bases(3, 2, 500, seed=9), haar_bases(3, 2, 500, seed=10))

    def test_blocks_depend_only_on_seed_and_index(self):
        long = haar_bases(3, 2, 3 * BLOCK_SIZE, seed=2)
        short = haar_bases(3, 2, BLOCK_SIZE + 100, seed=2)
        assert np.array_equal(long[:BLOCK_SIZE + 100], short)

    def test_lines_are_uniform(self):
        # the first coordinate of a uniform direction in R^3 is uniform on [-1, 1]
        first = haar_bases(3, 1, 4000, seed=0)[:, 0, 0]
        assert stats.kstest(first, "uniform", args=(-1.0, 2.0)).pvalue > 1e-3

    def test_planes_are_uniform(self):
        # a plane in R^3 is determined by its normal, which is uniform on the sphere
        bases = haar_bases(3, 2, 4000, seed=1)
        normals = np.cross(bases[:, :, 0], bases[:, :, 1])
        assert stats.kstest(np.abs(normals[:, 2]), "uniform").pvalue > 1e-3


class TestProjectionBatch:

    def test_polytope_volumes(self, cube3):
        bases = np.stack([np.eye(3)[:, :2], np.eye(3)[:, 1:]])
        batch = ProjectionBatch(cube3, bases)
        assert np.allclose(batch.volumes, [4.0, 4.0])
        assert np.allclose(batch.mixed_volumes(cube3), batch.volumes)

    def test_segments(self):
        E = Ellipsoid(np.diag([1.0, 4.0, 9.0]))
        bases = np.eye(3)[None, :, :1]
        assert np.allclose(ProjectionBatch(E, bases).volumes, [2.0])

    def test_ellipsoid_closed_form_and_outer_polygons(self):
        E = Ellipsoid(np.diag([1.0, 4.0, 9.0]))
        bases = haar_bases(3, 2, 50, seed=3)
        exact = ProjectionBatch(E, bases, projection_directions=1024)
        outer = ProjectionBatch(E, bases, projection_directions=1024, exact=False)
        assert np.all(outer.volumes >= exact.volumes)
        assert np.allclose(outer.volumes, exact.volumes, rtol=1e-4)
        assert np.allclose(exact.mixed_volumes(E), outer.volumes, rtol=1e-9)

    def test_outer_polytopes_in_three_dimensional_subspaces(self):
        batch = ProjectionBatch(ball(4), haar_bases(4, 3, 5, seed=0), projection_directions=2000, exact=False)
        assert np.allclose(batch.volumes, omega(3), rtol=0.05)
        assert np.all(batch.volumes >= omega(3))

    def test_lp_and_orlicz_integrands_agree(self, cube3):
        batch = ProjectionBatch(cube3, haar_bases(3, 2, 20, seed=0))
        L = simplex(3).dilate(3.0)
        assert np.allclose(batch.mixed_volumes(L, p=2.0), batch.mixed_volumes(L, phi=make_power(2)), rtol=1e-12)

    def test_dimension_mismatch(self, cube3, square):
        with pytest.raises(DimensionMismatchException):
            ProjectionBatch(square, haar_bases(3, 2, 4))
        batch = ProjectionBatch(cube3, haar_bases(3, 2, 4))
        with pytest.raises(DimensionMismatchException):
            batch.mixed_volumes(square)


class TestAffineQuermassintegral:

    @pytest.mark.parametrize("n, j", [(2, 1), (3, 1), (3, 2), (4, 2), (4, 3)])
    def test_ball(self, n, j):
        estimate = affine_quermassintegral(ball(n), j, samples=200)
        assert estimate.value == pytest.approx(omega(n), rel=1e-9)

    def test_boundary_values(self, cube3):
        assert affine_quermassintegral(cube3, 0).value == omega(3)
        top = affine_quermassintegral(cube3, 3)
        assert top.value == pytest.approx(8.0)
        assert top.stderr == 0.0
        assert top.samples == 1

    def test_invalid_j(self, cube3):
        with pytest.raises(ValueError):
            affine_quermassintegral(cube3, 4)

    def test_homogeneity(self, cube3):
        base = affine_quermassintegral(cube3, 2, SAMPLES, seed=5)
        scaled = affine_quermassintegral(cube3.dilate(1.5), 2, SAMPLES, seed=5)
        assert scaled.value == pytest.approx(1.5 ** 2 * base.value, rel=1e-9)

    def test_estimate_metadata(self, cube3):
        estimate = affine_quermassintegral(cube3, 2, SAMPLES, seed=4)
        assert estimate.samples == SAMPLES
        assert estimate.seed == 4
        assert 0 < estimate.stderr < 0.05 * estimate.value
        assert estimate.value == pytest.approx(omega(3) / omega(2) * estimate.raw_mean ** (-1 / 3), rel=1e-12)

    def test_sl_invariance(self):
        K = random_polytope(3, 0)
        T = LinearMap.random_special(3, np.random.default_rng(0))
        image = affine_quermassintegral(K.apply_linear(T), 2, 8000, seed=1)
        base = affine_quermassintegral(K, 2, 8000, seed=0)
        assert abs(image.value - base.value) <= 4 * math.hypot(image.stderr, base.stderr)

    def test_ellipsoid_attains_the_isoperimetric_bound(self):
        E = Ellipsoid(np.diag([1.0, 4.0, 9.0]))
        estimate = affine_quermassintegral(E, 2, SAMPLES, seed=0)
        expected = (omega(3) * volume(E) ** 2) ** (1 / 3)
        assert estimate.value == pytest.approx(expected, abs=4 * estimate.stderr)

    def test_cube_exceeds_the_isoperimetric_bound(self, cube3):
        estimate = affine_quermassintegral(cube3, 2, SAMPLES, seed=0)
        assert estimate.value ** 3 >= omega(3) * volume(cube3) ** 2 - 3 * 3 * estimate.value ** 2 * estimate.stderr


class TestMixedQuermassintegrals:

    def test_self_mixed(self, cube3, phi):
        mixed = orlicz_mixed_affine_quermassintegral(cube3, cube3, phi, 2, SAMPLES, seed=1)
        assert mixed.value == pytest.approx(affine_quermassintegral(cube3, 2, SAMPLES, seed=1).value, rel=1e-9)

    def test_alternative_self(self, cube3, phi):
        mixed = alternative_orlicz_mixed_affine_quermassintegral(cube3, cube3, phi, 2, SAMPLES, seed=1)
        assert mixed.value == pytest.approx(affine_quermassintegral(cube3, 2, SAMPLES, seed=1).value, rel=1e-9)

    def test_dilate_argument(self, cube3, phi):
        base = orlicz_mixed_affine_quermassintegral(cube3, cube3, phi, 2, SAMPLES, seed=2)
        scaled = orlicz_mixed_affine_quermassintegral(cube3, cube3.dilate(2.0), phi, 2, SAMPLES, seed=2)
        assert scaled.value == pytest.approx(phi(2.0) ** (-1 / 3) * base.value, rel=1e-9)

    def test_lp_is_power_phi(self, cube3):
        L = random_polytope(3, 1)
        lp = lp_mixed_affine_quermassintegral(cube3, L, 2.0, 2, SAMPLES, seed=3)
        phi = orlicz_mixed_affine_quermassintegral(cube3, L, make_power(2), 2, SAMPLES, seed=3)
        assert lp.value == pytest.approx(phi.value, rel=1e-10)
        V1 = mixed_affine_quermassintegral(cube3, L, 2, SAMPLES, seed=3)
        assert V1.value == pytest.approx(
            orlicz_mixed_affine_quermassintegral(cube3, L, make_power(1), 2, SAMPLES, seed=3).value, rel=1e-10)

    def test_full_dimensional_subspace(self, cube3, phi):
        L = ball(3, 0.5)
        estimate = orlicz_mixed_affine_quermassintegral(cube3, L, phi, 3)
        expected = orlicz_mixed_volume(cube3, L, phi) * volume(cube3) ** -4
        assert estimate.value ** -3 == pytest.approx(expected, rel=1e-10)

    def test_needs_polytope_or_outer(self, cube3):
        E = ball(3)
        with pytest.raises(UnsupportedBodyException):
            orlicz_mixed_affine_quermassintegral(E, cube3, make_power(1), 2, 100)
        estimate = orlicz_mixed_affine_quermassintegral(E, E, make_power(1), 2, 100, allow_outer=True)
        assert estimate.value == pytest.approx(omega(3), rel=1e-3)

    def test_invalid_arguments(self, cube3, square):
        with pytest.raises(ValueError):
            lp_mixed_affine_quermassintegral(cube3, cube3, 0.5, 2)
        with pytest.raises(DimensionMismatchException):
            orlicz_mixed_affine_quermassintegral(cube3, square, make_power(1), 2)


class TestFirstVariation:

    def test_dilation_is_exact(self, cube3):
        estimate = first_variation_quermass(cube3, cube3, make_power(1), 2, samples=SAMPLES, seed=0)
        assert not estimate.noisy
        assert estimate.relative_error < 0.01

    def test_cube_and_ball(self, cube3):
        estimate = first_variation_quermass(cube3, ball(3), make_power(2), 2, samples=SAMPLES, seed=0)
        assert estimate.noisy or estimate.relative_error < 0.05
        if estimate.noisy:
            assert estimate.required_samples > SAMPLES

    def test_full_dimension_is_volume(self, square, triangle):
        estimate = first_variation_quermass(square, triangle, make_power(1), 2)
        assert estimate.relative_error < 0.03
