"""Coexact extraction, consistency split, windows, subspace distance."""

from __future__ import annotations

import numpy as np
import pytest

from hodgelab import fixtures
from hodgelab.complex_core import laplacian, unit_weights
from hodgelab.errors import (
    ConsistencyViolation,
    DimensionMismatch,
    EndpointTooCloseToSpectrum,
    InconsistentSpectra,
)
from hodgelab.spectral import (
    coexact_from_full,
    coexact_spectrum,
    full_spectrum,
    hodge_consistency,
    spectral_window,
    subspace_distance,
)


class TestCoexactSpectrum:
    def test_triangle_functions(self):
        K = fixtures.triangle_boundary()
        spec = coexact_spectrum(K, unit_weights(K), 0)
        assert spec.values == pytest.approx([3.0, 3.0], abs=1e-12)

    def test_top_degree_empty(self):
        K = fixtures.triangle_boundary()
        assert len(coexact_spectrum(K, unit_weights(K), 1)) == 0

    def test_tetrahedron_functions(self):
        K = fixtures.tetrahedron_boundary()
        spec = coexact_spectrum(K, unit_weights(K), 0)
        assert spec.values == pytest.approx([4.0, 4.0, 4.0], abs=1e-12)

    def test_eigencochains_are_w_orthonormal_eigenvectors(self):
        K = fixtures.octahedron()
        W = unit_weights(K).replace([
            np.linspace(1.0, 2.0, K.n_simplices(0)),
            np.linspace(0.5, 1.5, K.n_simplices(1)),
            np.linspace(0.8, 1.2, K.n_simplices(2)),
        ])
        spec = coexact_spectrum(K, W, 1)
        L = laplacian(K, W, 1).operator()
        gram = spec.cochains.T @ (W.w[1][:, None] * spec.cochains)
        assert gram == pytest.approx(np.eye(len(spec)), abs=1e-10)
        for k in range(len(spec)):
            phi = spec.cochains[:, k]
            resid = L @ phi - spec.values[k] * phi
            assert np.max(np.abs(resid)) < 1e-9 * max(1.0, spec.values[k])

    def test_eigencochains_have_no_exact_part(self):
        K = fixtures.octahedron()
        W = unit_weights(K)
        spec = coexact_spectrum(K, W, 1)
        d0 = K.coboundary(0)   # gradient fields are its columns
        overlap = spec.cochains.T @ (W.w[1][:, None] * d0)
        assert np.max(np.abs(overlap)) < 1e-9


class TestHodgeConsistency:
    @pytest.mark.parametrize("make", [
        fixtures.triangle_boundary,
        fixtures.tetrahedron_boundary,
        fixtures.octahedron,
        fixtures.two_disjoint_triangles,
    ])
    def test_fixtures_pass_every_degree(self, make):
        K = make()
        W = unit_weights(K)
        for p in range(K.top_dim + 1):
            report = hodge_consistency(K, W, p)
            assert report.passed and report.max_deviation <= 1e-9

    def test_triangle_degree_one_detail(self):
        K = fixtures.triangle_boundary()
        report = hodge_consistency(K, unit_weights(K), 1)
        assert report.kernel_dim == 1 and report.n_nonzero == 2

    def test_weighted_fixture(self):
        K = fixtures.octahedron()
        rng = np.random.default_rng(5)
        W = unit_weights(K).replace([
            rng.uniform(0.5, 2.0, K.n_simplices(j)) for j in range(3)
        ])
        for p in range(3):
            assert hodge_consistency(K, W, p).passed


class TestCoexactFromFull:
    def test_degree_zero_base_case(self):
        out = coexact_from_full([np.array([0.0, 3.0, 3.0])], [1])
        assert out[0] == pytest.approx([3.0, 3.0])

    def test_triangle_chain(self):
        K = fixtures.triangle_boundary()
        W = unit_weights(K)
        full = [full_spectrum(K, W, p) for p in range(2)]
        out = coexact_from_full(full, [1, 1])
        assert out[0] == pytest.approx([3.0, 3.0], abs=1e-12)
        assert len(out[1]) == 0

    def test_matches_direct_computation(self):
        K = fixtures.octahedron()
        W = unit_weights(K)
        full = [full_spectrum(K, W, p) for p in range(3)]
        from hodgelab.complex_core import betti
        out = coexact_from_full(full, betti(K))
        for p in range(3):
            direct = coexact_spectrum(K, W, p).values
            assert out[p] == pytest.approx(direct, abs=1e-9)

    def test_inconsistent_rejected(self):
        with pytest.raises(InconsistentSpectra):
            coexact_from_full([np.array([0.0, 3.0]), np.array([0.0, 5.0])], [1, 1])


class TestSpectralWindow:
    def test_two_eigenpairs(self):
        K = fixtures.triangle_boundary()
        win = spectral_window(K, unit_weights(K), 0, (1.0, 5.0))
        assert win.values == pytest.approx([3.0, 3.0], abs=1e-12)

    def test_empty_window(self):
        K = fixtures.triangle_boundary()
        win = spectral_window(K, unit_weights(K), 0, (4.0, 9.0))
        assert len(win) == 0

    def test_margin_guard(self):
        K = fixtures.triangle_boundary()
        with pytest.raises(EndpointTooCloseToSpectrum):
            spectral_window(K, unit_weights(K), 0, (3.0 - 1e-12, 4.0))


class TestSubspaceDistance:
    def test_identity(self):
        e = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        assert subspace_distance(e, e) == pytest.approx(0.0, abs=1e-14)

    def test_orthogonal_lines(self):
        e = np.array([[1.0], [0.0]])
        f = np.array([[0.0], [1.0]])
        assert subspace_distance(e, f) == pytest.approx(1.0, abs=1e-14)

    def test_thirty_degrees(self):
        e = np.array([[1.0], [0.0]])
        f = np.array([[np.cos(np.pi / 6)], [np.sin(np.pi / 6)]])
        assert subspace_distance(e, f) == pytest.approx(0.5, abs=1e-12)

    def test_symmetric(self):
        rng = np.random.default_rng(2)
        e = rng.normal(size=(8, 2))
        f = rng.normal(size=(8, 2))
        w = rng.uniform(0.5, 2.0, 8)
        assert subspace_distance(e, f, w) == pytest.approx(subspace_distance(f, e, w))

    def test_dimension_mismatch_warns(self):
        e = np.eye(4)[:, :2]
        f = np.eye(4)[:, :1]
        with pytest.warns(DimensionMismatch):
            d = subspace_distance(e, f)
        assert d == pytest.approx(0.0, abs=1e-14)

    def test_triangle_inequality_random(self):
        rng = np.random.default_rng(42)
        for _ in range(50):
            n = int(rng.integers(4, 20))
            k = int(rng.integers(1, 5))
            spans = [rng.normal(size=(n, k)) for _ in range(3)]
            d01 = subspace_distance(spans[0], spans[1])
            d12 = subspace_distance(spans[1], spans[2])
            d02 = subspace_distance(spans[0], spans[2])
            assert d02 <= d01 + d12 + 1e-10
