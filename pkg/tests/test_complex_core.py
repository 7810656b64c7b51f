"""Core complex construction, Laplacians, homothety, pullback."""

from __future__ import annotations

import numpy as np
import pytest

from hodgelab import fixtures
from hodgelab.complex_core import (
    Cochain,
    betti,
    build_complex,
    from_json_dict,
    homothety,
    laplacian,
    pullback,
    simplicial_map,
    to_json_dict,
    unit_weights,
    volume,
)
from hodgelab.errors import (
    DegreeOutOfRange,
    DuplicateSimplex,
    MissingFace,
    NonpositiveScale,
    NotSimplicialMap,
    OrientationError,
)


def _spectrum(K, W, p):
    return laplacian(K, W, p).eigenvalues()


class TestBuildComplex:
    def test_triangle_boundary_valid(self):
        K = fixtures.triangle_boundary()
        assert K.top_dim == 1
        assert K.n_simplices(0) == 3 and K.n_simplices(1) == 3

    def test_tetrahedron_boundary_valid(self):
        K = fixtures.tetrahedron_boundary()
        assert (K.n_simplices(0), K.n_simplices(1), K.n_simplices(2)) == (4, 6, 4)

    def test_boundary_squares_to_zero(self):
        for K in (fixtures.tetrahedron_boundary(), fixtures.octahedron()):
            for j in range(1, K.top_dim):
                prod = K.boundary[j] @ K.boundary[j + 1]
                assert not np.any(prod), "integer boundary composition must vanish"

    def test_missing_face_rejected(self):
        with pytest.raises(MissingFace):
            build_complex([[(1,)], [(1, 2)]])

    def test_duplicate_rejected(self):
        with pytest.raises(DuplicateSimplex):
            build_complex([[(0,), (1,)], [(0, 1), (0, 1)]])

    def test_unsorted_tuple_rejected(self):
        with pytest.raises(OrientationError):
            build_complex([[(0,), (1,)], [(1, 0)]])


class TestLaplacian:
    def test_triangle_functions(self):
        K = fixtures.triangle_boundary()
        vals = _spectrum(K, unit_weights(K), 0)
        assert vals == pytest.approx([0.0, 3.0, 3.0], abs=1e-12)

    def test_tetrahedron_functions(self):
        K = fixtures.tetrahedron_boundary()
        vals = _spectrum(K, unit_weights(K), 0)
        assert vals == pytest.approx([0.0, 4.0, 4.0, 4.0], abs=1e-12)

    def test_triangle_one_forms(self):
        K = fixtures.triangle_boundary()
        op = laplacian(K, unit_weights(K), 1)
        assert op.eigenvalues() == pytest.approx([0.0, 3.0, 3.0], abs=1e-12)
        assert op.kernel_dim() == 1  # b_1 of the circle

    def test_symmetric_psd(self):
        K = fixtures.octahedron()
        W = unit_weights(K)
        for p in range(3):
            s = laplacian(K, W, p).s
            assert np.allclose(s, s.T, atol=1e-13)
            assert np.min(np.linalg.eigvalsh(s)) > -1e-12

    def test_degree_out_of_range(self):
        K = fixtures.triangle_boundary()
        with pytest.raises(DegreeOutOfRange):
            laplacian(K, unit_weights(K), 2)


class TestBetti:
    def test_circle(self):
        assert betti(fixtures.triangle_boundary()) == (1, 1)

    def test_sphere(self):
        assert betti(fixtures.tetrahedron_boundary()) == (1, 0, 1)
        assert betti(fixtures.octahedron()) == (1, 0, 1)

    def test_disjoint_union_additive(self):
        assert betti(fixtures.two_disjoint_triangles()) == (2, 2)

    def test_kernel_matches_betti(self):
        K = fixtures.octahedron()
        W = unit_weights(K)
        b = betti(K)
        for p in range(3):
            assert laplacian(K, W, p).kernel_dim() == b[p]


class TestVolumeHomothety:
    def test_unit_volume(self):
        K = fixtures.tetrahedron_boundary()
        assert volume(unit_weights(K)) == 4.0

    def test_explicit_weights(self):
        K = fixtures.triangle_boundary()
        W = unit_weights(K).replace([np.array([0.5, 0.5, 1.0]), np.ones(3)])
        assert volume(W) == 2.0

    def test_scaling_law_volume(self):
        K = fixtures.tetrahedron_boundary()
        W = homothety(unit_weights(K), 2.0, 3)
        assert volume(W) == 32.0

    def test_identity(self):
        K = fixtures.triangle_boundary()
        W = unit_weights(K)
        W2 = homothety(W, 1.0, 2)
        for p in range(2):
            assert np.array_equal(W.w[p], W2.w[p])

    def test_eigenvalue_scaling(self):
        K = fixtures.triangle_boundary()
        W = homothety(unit_weights(K), 2.0, 2)
        assert _spectrum(K, W, 0) == pytest.approx([0.0, 0.75, 0.75], abs=1e-12)

    def test_group_action(self):
        K = fixtures.tetrahedron_boundary()
        W = unit_weights(K)
        twice = homothety(homothety(W, np.sqrt(2.0), 2), np.sqrt(2.0), 2)
        once = homothety(W, 2.0, 2)
        for p in range(3):
            assert twice.w[p] == pytest.approx(once.w[p], rel=1e-14)

    def test_random_scaling_property(self):
        rng = np.random.default_rng(7)
        K = fixtures.octahedron()
        for _ in range(10):
            w = tuple(rng.uniform(0.5, 2.0, K.n_simplices(j)) for j in range(3))
            W = unit_weights(K).replace(w)
            c = float(rng.uniform(0.2, 4.0))
            Wc = homothety(W, c, 3)
            for p in range(3):
                before = _spectrum(K, W, p)
                after = _spectrum(K, Wc, p)
                assert after == pytest.approx(before / c**2, rel=1e-10, abs=1e-12)

    def test_nonpositive_scale(self):
        K = fixtures.triangle_boundary()
        with pytest.raises(NonpositiveScale):
            homothety(unit_weights(K), 0.0, 2)


class TestPullback:
    def test_identity(self):
        K = fixtures.triangle_boundary()
        f = simplicial_map(K, {0: 0, 1: 1, 2: 2})
        phi = Cochain(K, 1, np.array([1.0, 2.0, 3.0]))
        assert np.array_equal(pullback(f, phi).values, phi.values)

    def test_orientation_sign_flip(self):
        # swapping two vertices of the triangle reverses the (0,1) edge
        K = fixtures.triangle_boundary()
        f = simplicial_map(K, {0: 1, 1: 0, 2: 2})
        phi = Cochain(K, 1, np.array([1.0, 0.0, 0.0]))  # supported on edge (0,1)
        assert pullback(f, phi).values[K.index[1][(0, 1)]] == -1.0

    def test_antipodal_involution(self):
        K = fixtures.octahedron()
        f = simplicial_map(K, fixtures.octahedron_antipodal_map())
        assert f.is_involution()

    def test_collapse_rejected(self):
        K = fixtures.triangle_boundary()
        with pytest.raises(NotSimplicialMap):
            simplicial_map(K, {0: 0, 1: 0, 2: 2})

    def test_commutes_with_coboundary(self):
        K = fixtures.octahedron()
        f = simplicial_map(K, fixtures.octahedron_antipodal_map())
        rng = np.random.default_rng(3)
        phi = Cochain(K, 0, rng.normal(size=K.n_simplices(0)))
        d = K.coboundary(0)
        lhs = pullback(f, Cochain(K, 1, d @ phi.values)).values
        rhs = d @ pullback(f, phi).values
        assert lhs == pytest.approx(rhs, abs=1e-14)

    def test_commutes_with_laplacian_when_weight_preserving(self):
        K = fixtures.octahedron()
        W = unit_weights(K)
        f = simplicial_map(K, fixtures.octahedron_antipodal_map())
        assert f.preserves_weights(W)
        rng = np.random.default_rng(11)
        for p in range(3):
            L = laplacian(K, W, p).operator()
            x = rng.normal(size=K.n_simplices(p))
            lhs = pullback(f, Cochain(K, p, L @ x)).values
            rhs = L @ pullback(f, Cochain(K, p, x)).values
            assert np.max(np.abs(lhs - rhs)) < 1e-12


class TestJson:
    def test_round_trip(self):
        K = fixtures.tetrahedron_boundary()
        W = homothety(unit_weights(K), 1.5, 2)
        K2, W2 = from_json_dict(to_json_dict(K, W))
        assert K2.simplices == K.simplices
        for p in range(3):
            assert W2.w[p] == pytest.approx(W.w[p], rel=0, abs=0)
