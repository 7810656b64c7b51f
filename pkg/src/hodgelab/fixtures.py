"""Small reference complexes used by tests, examples and the CLI."""

from __future__ import annotations

import math

import numpy as np

from .complex_core import SimplicialComplex, WeightSystem, build_complex, unit_weights


def triangle_boundary() -> SimplicialComplex:
    """Circle as three vertices and three edges; function spectrum {0, 3, 3}."""
    return build_complex([
        [(0,), (1,), (2,)],
        [(0, 1), (0, 2), (1, 2)],
    ])


def tetrahedron_boundary() -> SimplicialComplex:
    """2-sphere as the boundary of the 3-simplex; function spectrum {0, 4, 4, 4}."""
    verts = [(v,) for v in range(4)]
    edges = [(a, b) for a in range(4) for b in range(a + 1, 4)]
    tris = [(a, b, c) for a in range(4) for b in range(a + 1, 4) for c in range(b + 1, 4)]
    return build_complex([verts, edges, tris])


def octahedron() -> SimplicialComplex:
    """2-sphere on 6 vertices; antipodal pairs are (0,5), (1,4), (2,3)."""
    verts = [(v,) for v in range(6)]
    tris = []
    for a in (0, 5):
        for b in (1, 4):
            for c in (2, 3):
                tris.append(tuple(sorted((a, b, c))))
    edges = sorted({(s[i], s[j]) for s in tris for i in range(3) for j in range(i + 1, 3)})
    return build_complex([verts, edges, sorted(tris)])


def octahedron_antipodal_map() -> dict:
    return {0: 5, 5: 0, 1: 4, 4: 1, 2: 3, 3: 2}


def two_disjoint_triangles() -> SimplicialComplex:
    return build_complex([
        [(v,) for v in range(6)],
        [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)],
    ])


def disk_fan(apex: int, ring: list[int]):
    """Cells of a disk: a ring coned to an apex.  Returns (edges, triangles)."""
    m = len(ring)
    edges = [tuple(sorted((ring[k], ring[(k + 1) % m]))) for k in range(m)]
    edges += [tuple(sorted((apex, v))) for v in ring]
    tris = [tuple(sorted((apex, ring[k], ring[(k + 1) % m]))) for k in range(m)]
    return edges, tris


def two_ring_base(m: int = 8, seed_phase: float = 0.9):
    """Connected base complex carrying two coned m-rings for handle feet.

    Each ring is a cycle of m vertices filled by a cone, so every base cycle
    bounds and the degree-1 up-spectrum stays at unit scale.  Ring edge
    weights are modulated by a first-harmonic pattern (different phase per
    ring); this angular asymmetry is what lets an attached handle's rotation
    couple to the base.  Returns ``(K, W, ring_a, ring_b)``.
    """
    ring_a = list(range(m))                 # 0..m-1
    apex_a = m
    ring_b = list(range(m + 1, 2 * m + 1))  # m+1..2m
    apex_b = 2 * m + 1

    edges_a, tris_a = disk_fan(apex_a, ring_a)
    edges_b, tris_b = disk_fan(apex_b, ring_b)
    bridge = (apex_a, apex_b)
    verts = [(v,) for v in range(2 * m + 2)]
    edges = sorted(set(edges_a + edges_b + [bridge]))
    tris = sorted(set(tris_a + tris_b))
    K = build_complex([verts, edges, tris])

    W = unit_weights(K)
    w1 = W.w[1].copy()
    w2 = W.w[2].copy()

    def modulate(ring, phase, amp=0.35):
        msize = len(ring)
        for k in range(msize):
            e = tuple(sorted((ring[k], ring[(k + 1) % msize])))
            w1[K.index[1][e]] = 1.0 + amp * math.cos(2.0 * math.pi * (k + 0.5) / msize + phase)

    modulate(ring_a, 0.0)
    modulate(ring_b, seed_phase)
    # mild radial irregularity so no accidental symmetry survives
    for k, v in enumerate(ring_a):
        e = tuple(sorted((apex_a, v)))
        w1[K.index[1][e]] = 1.0 + 0.1 * math.sin(2.0 * math.pi * k / m + 0.4)
    for k, v in enumerate(ring_b):
        e = tuple(sorted((apex_b, v)))
        w1[K.index[1][e]] = 1.0 + 0.1 * math.sin(2.0 * math.pi * k / m + 1.7)
    for t in range(len(w2)):
        w2[t] = 1.0 + 0.05 * math.cos(1.3 * t)

    W = W.replace([W.w[0], w1, w2])
    return K, W, ring_a, ring_b
