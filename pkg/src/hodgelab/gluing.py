"""Thin-handle attachment, union-spectrum convergence, dumbbell gadgets.

Gluing model: parts keep their cells; a handle adds connector simplices
between attachment sites.  A connector cell generated by a site with profile
value ``rho`` is weighted ``eps * rho * geomean(endpoint weights)``, so the
handle vanishes with the coupling and ``eps = 0`` is literally the disjoint
union.  Connector triangles additionally carry ``triangle_boost``; the boost
parks the handle's internal one-form modes at ``boost * O(1)``, above any
window of interest, instead of letting them sit inside the low spectrum
(they neither vanish nor diverge with ``eps``, so they must be placed).

Dumbbell gadgets are weighted complexes with one small coexact eigenvalue in
a chosen degree, every other low eigenvalue bounded below uniformly in the
thinness parameter ``u``, and an involution that negates the small mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .complex_core import (
    Cochain,
    SimplicialComplex,
    SimplicialMap,
    WeightSystem,
    build_complex,
    inner,
    pullback,
    simplicial_map,
)
from .errors import (
    DegreeMismatch,
    EigenvalueNotSimple,
    SiteDimensionMismatch,
    UnsupportedDegree,
    WindowTouchesSpectrum,
)
from .spectral import CoexactSpectrum, coexact_spectrum, subspace_distance

Simplex = tuple[int, ...]


# ---------------------------------------------------------------------------
# attachment
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AttachmentSpec:
    """Handle footprint: ordered site pairs, coupling and weight profile.

    ``sites[k] = (simplex_in_base, simplex_in_attachment)`` with matching
    dimensions; vertex order inside a pair fixes the prism correspondence.
    ``profile`` holds one nonnegative multiplier per site, summing to one.
    """

    sites: tuple
    epsilon: float
    profile: tuple
    triangle_boost: float = 1.0

    def __post_init__(self):
        if len(self.profile) != len(self.sites):
            raise SiteDimensionMismatch("profile length must match site count")
        if any(r < 0 for r in self.profile):
            raise SiteDimensionMismatch("profile entries must be nonnegative")
        total = float(sum(self.profile))
        if self.sites and abs(total - 1.0) > 1e-9:
            raise SiteDimensionMismatch(f"profile must sum to 1, got {total}")
        if self.epsilon < 0:
            raise SiteDimensionMismatch("coupling must be nonnegative")
        for sb, sa in self.sites:
            if len(sb) != len(sa):
                raise SiteDimensionMismatch(f"site pair {sb} / {sa} mixes dimensions")
            if len(sb) > 2:
                raise SiteDimensionMismatch("sites of dimension > 1 are not supported")

    def with_epsilon(self, eps: float) -> "AttachmentSpec":
        return replace(self, epsilon=float(eps))


@dataclass(frozen=True, eq=False)
class GluedComplex:
    """Result of :func:`attach`: complex, weights and part bookkeeping."""

    complex: SimplicialComplex
    weights: WeightSystem
    vertex_maps: tuple          # per part (base first): original label -> glued label
    connector_cells: tuple      # (dim, glued simplex tuple)

    def glued_simplex(self, part: int, simplex: Simplex) -> Simplex:
        vm = self.vertex_maps[part]
        return tuple(sorted(vm[v] for v in simplex))

    def embed_cochain(self, part: int, phi: Cochain) -> Cochain:
        """Zero-extend a part cochain into the glued complex."""
        p = phi.degree
        out = np.zeros(self.complex.n_simplices(p))
        for i, s in enumerate(phi.complex.simplices[p]):
            out[self.complex.index[p][self.glued_simplex(part, s)]] = phi.values[i]
        return Cochain(self.complex, p, out)


def _prism_cells(sb, sa, vm_base, vm_gadget):
    """Connector cells for one site pair, already in glued labels.

    Vertex pairs give a single rung edge; edge pairs give the triangulated
    prism (two rungs, one diagonal, two triangles).
    """
    b = [vm_base[v] for v in sb]
    a = [vm_gadget[v] for v in sa]
    if len(sb) == 1:
        return [(1, (b[0], a[0]))], []
    edges = [(1, (b[0], a[0])), (1, (b[1], a[1])), (1, (b[0], a[1]))]
    tris = [(2, (b[0], b[1], a[1])), (2, (b[0], a[0], a[1]))]
    return edges, tris


def attach(base, gadgets) -> GluedComplex:
    """Glue gadget complexes onto a base through thin handles.

    ``base`` is a ``(complex, weights)`` pair and each gadget entry is
    ``(complex, weights, AttachmentSpec)``.  Vertex namespaces are renamed
    apart automatically.  Connector weights follow the spec on the
    attachment; duplicated connector cells (shared prism rungs) accumulate.
    """
    K0, W0 = base
    parts = [(K0, W0)] + [(K, W) for K, W, _ in gadgets]

    vertex_maps = []
    next_label = 0
    for K, _ in parts:
        vm = {}
        for v in K.vertices():
            vm[v] = next_label
            next_label += 1
        vertex_maps.append(vm)

    top_dim = max(K.top_dim for K, _ in parts)

    # connector weights accumulate per sorted glued simplex
    connector: dict = {}
    for gi, (K, W, spec) in enumerate(gadgets, start=1):
        if spec.epsilon == 0.0:
            continue
        vm_b, vm_g = vertex_maps[0], vertex_maps[gi]
        for (sb, sa), rho in zip(spec.sites, spec.profile):
            dim = len(sb) - 1
            sb_key = tuple(sorted(sb))
            sa_key = tuple(sorted(sa))
            if sb_key not in K0.index[dim]:
                raise SiteDimensionMismatch(f"base site {sb} is not a base simplex")
            if sa_key not in K.index[dim]:
                raise SiteDimensionMismatch(f"attachment site {sa} is not a gadget simplex")
            if rho == 0.0:
                continue
            g = math.sqrt(W0.w[dim][K0.index[dim][sb_key]] * W.w[dim][K.index[dim][sa_key]])
            scale = spec.epsilon * rho * g
            edges, tris = _prism_cells(sb, sa, vm_b, vm_g)
            for d, cell in edges:
                key = (d, tuple(sorted(cell)))
                connector[key] = connector.get(key, 0.0) + scale
            for d, cell in tris:
                key = (d, tuple(sorted(cell)))
                connector[key] = connector.get(key, 0.0) + scale * spec.triangle_boost

    if any(d == 2 for d, _ in connector):
        top_dim = max(top_dim, 2)

    lists: list[list[Simplex]] = [[] for _ in range(top_dim + 1)]
    weights: list[list[float]] = [[] for _ in range(top_dim + 1)]
    for (K, W), vm in zip(parts, vertex_maps):
        for j in range(K.top_dim + 1):
            for s, w in zip(K.simplices[j], W.w[j]):
                lists[j].append(tuple(sorted(vm[v] for v in s)))
                weights[j].append(float(w))
    for (d, cell), w in sorted(connector.items()):
        lists[d].append(cell)
        weights[d].append(w)

    glued_K = build_complex(lists)
    glued_W = WeightSystem(glued_K, tuple(np.asarray(w) for w in weights))
    return GluedComplex(
        complex=glued_K,
        weights=glued_W,
        vertex_maps=tuple(vertex_maps),
        connector_cells=tuple(sorted(connector.keys())),
    )


# ---------------------------------------------------------------------------
# union spectra and convergence scans
# ---------------------------------------------------------------------------

def union_spectrum(parts) -> np.ndarray:
    """Sorted multiset union of coexact spectra of one common degree."""
    degrees = {s.degree for s in parts}
    if len(degrees) > 1:
        raise DegreeMismatch(f"mixed degrees {sorted(degrees)} in union")
    if not parts:
        return np.empty(0)
    return np.sort(np.concatenate([s.values for s in parts]))


@dataclass(frozen=True)
class ScanRow:
    eps: float
    index: int
    mu: float
    deviation: float
    subspace_dist: float


@dataclass(frozen=True)
class ConvergenceScan:
    degree: int
    window: tuple
    reference: np.ndarray
    rows: tuple

    def deviations_by_eps(self) -> dict:
        out: dict = {}
        for r in self.rows:
            out.setdefault(r.eps, []).append(r.deviation)
        return {k: max(v) for k, v in out.items()}

    def distances_by_eps(self) -> dict:
        return {r.eps: r.subspace_dist for r in self.rows}

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("eps,i,mu_i,deviation,subspace_distance\n")
            for r in self.rows:
                fh.write(f"{r.eps:.17g},{r.index},{r.mu:.17g},"
                         f"{r.deviation:.17g},{r.subspace_dist:.17g}\n")


def convergence_scan(base, gadgets, p: int, eps_list, window,
                     count: int = 5, margin: float = 1e-8) -> ConvergenceScan:
    """Deviation of the glued coexact spectrum from the decoupled union.

    For every coupling in the strictly decreasing ``eps_list`` the scan
    reports ``|mu_{p,i}(eps) - mu'_{p,i}|`` for ``i <= count`` and the
    distance between the glued window eigenspace and the zero-extended
    decoupled one.
    """
    eps_list = [float(e) for e in eps_list]
    if any(e <= 0 for e in eps_list) or any(a <= b for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing and positive")

    part_pairs = [base] + [(K, W) for K, W, _ in gadgets]
    part_specs = [coexact_spectrum(K, W, p) for K, W in part_pairs]
    reference = union_spectrum(part_specs)
    lo, hi = float(window[0]), float(window[1])
    guard = margin * max(1.0, float(reference[-1]) if len(reference) else 1.0)
    if len(reference) and min(np.min(np.abs(reference - lo)), np.min(np.abs(reference - hi))) < guard:
        raise WindowTouchesSpectrum(f"window ({lo}, {hi}) touches the decoupled spectrum")

    rows = []
    for eps in eps_list:
        glued = attach(base, [(K, W, spec.with_epsilon(eps)) for K, W, spec in gadgets])
        spec_glued = coexact_spectrum(glued.complex, glued.weights, p)
        k = min(count, len(reference), len(spec_glued.values))
        devs = np.abs(spec_glued.values[:k] - reference[:k])

        ref_basis = _window_basis_embedded(glued, part_pairs, part_specs, lo, hi)
        keep = (spec_glued.values > lo) & (spec_glued.values < hi)
        dist = subspace_distance(ref_basis, spec_glued.cochains[:, keep],
                                 glued.weights.w[p])
        for i in range(k):
            rows.append(ScanRow(eps=eps, index=i + 1, mu=float(spec_glued.values[i]),
                                deviation=float(devs[i]), subspace_dist=dist))
    return ConvergenceScan(degree=p, window=(lo, hi), reference=reference,
                           rows=tuple(rows))


def _window_basis_embedded(glued: GluedComplex, part_pairs, part_specs,
                           lo, hi) -> np.ndarray:
    """Zero-extended decoupled eigencochains with eigenvalue inside (lo, hi)."""
    cols = []
    for part, ((K, _), spec) in enumerate(zip(part_pairs, part_specs)):
        for k, mu in enumerate(spec.values):
            if lo < mu < hi:
                phi = Cochain(K, spec.degree, spec.cochains[:, k])
                cols.append(glued.embed_cochain(part, phi).values)
    n = glued.complex.n_simplices(part_specs[0].degree)
    if not cols:
        return np.zeros((n, 0))
    return np.stack(cols, axis=1)


# ---------------------------------------------------------------------------
# dumbbell gadgets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DumbbellGadget:
    """One small coexact eigenvalue, floors elsewhere, odd involution.

    ``ring`` is the cyclically ordered attachment footprint (even length);
    the involution acts on it as the half turn and negates the small mode.
    ``floor_c`` and ``volume_bound`` are the constructor-reported constants
    of the contract; tests verify them across the supported ``u`` range.
    """

    complex: SimplicialComplex
    weights: WeightSystem
    n: int
    degree: int
    u: float
    ring: tuple
    involution: SimplicialMap
    floor_c: float
    volume_bound: float

    def ring_edges(self):
        m = len(self.ring)
        return [tuple(sorted((self.ring[k], self.ring[(k + 1) % m])))
                for k in range(m)]

    def small_mode(self):
        spec = coexact_spectrum(self.complex, self.weights, self.degree)
        return float(spec.values[0]), Cochain(self.complex, self.degree,
                                              spec.cochains[:, 0])


SUPPORTED_DUMBBELLS = {(2, 0), (3, 1)}
_U_MAX = {(2, 0): 0.5, (3, 1): 0.2}


def dumbbell(n: int, p: int, u: float) -> DumbbellGadget:
    """Generalized Cheeger dumbbell for the supported (n, p) table."""
    if (n, p) not in SUPPORTED_DUMBBELLS:
        raise UnsupportedDegree(f"no dumbbell recipe for (n, p) = ({n}, {p})")
    if not 0.0 < u <= _U_MAX[(n, p)]:
        raise ValueError(f"u must lie in (0, {_U_MAX[(n, p)]}], got {u}")
    if (n, p) == (2, 0):
        return _classical_dumbbell(u)
    return _flow_barrel(u)


def _classical_dumbbell(u: float) -> DumbbellGadget:
    """Two tetrahedron-boundary lobes joined by one neck edge of weight u."""
    def lobe(offset):
        verts = [offset + i for i in range(4)]
        edges = [(verts[a], verts[b]) for a in range(4) for b in range(a + 1, 4)]
        tris = [(verts[a], verts[b], verts[c])
                for a in range(4) for b in range(a + 1, 4) for c in range(b + 1, 4)]
        return verts, edges, tris

    va, ea, ta = lobe(0)
    vb, eb, tb = lobe(4)
    neck = (0, 4)
    K = build_complex([
        [(v,) for v in va + vb],
        sorted(ea + eb + [neck]),
        sorted(ta + tb),
    ])
    w1 = np.ones(K.n_simplices(1))
    w1[K.index[1][neck]] = u
    W = WeightSystem(K, (np.ones(8), w1, np.ones(8)))
    upsilon = simplicial_map(K, {i: (i + 4) % 8 for i in range(8)})
    return DumbbellGadget(complex=K, weights=W, n=2, degree=0, u=u,
                          ring=(0, 4), involution=upsilon,
                          floor_c=2.0, volume_bound=10.0)


def _flow_barrel(u: float, m: int = 8, levels: int = 4) -> DumbbellGadget:
    """Degree-1 dumbbell: a capped cylinder split by a heavy equatorial seam.

    A closed barrel surface (quad grid with ``m`` angular positions and
    ``levels + 1`` rings, one center vertex per quad, two cap fans) carries
    unit weights except along the waist: the waist ring edges get weight
    ``1/u`` and the triangles containing them ``1/u`` as well.  In the dual
    face graph the heavy edges are weak conductances, so the two hemispheres
    form a Cheeger pair whose odd mode is the single small coexact one-form
    eigenvalue, of order ``u``; the heavy waist triangles keep the waist
    circulation at unit scale.  Function spectra never see ``u``.

    The attachment ring is the waist ring itself and the involution is the
    half turn about the axis composed with the vertical flip: it swaps the
    hemispheres (negating the small mode) and rotates the ring half way.
    """
    if levels % 2:
        raise ValueError("levels must be even so the seam sits on the waist")
    if m % 2:
        raise ValueError("angular resolution must be even for the half turn")
    j0 = levels // 2
    heavy = 1.0 / u

    labels: dict = {}

    def vid(key):
        if key not in labels:
            labels[key] = len(labels)
        return labels[key]

    grid = {(k, j): vid(("x", k, j)) for j in range(levels + 1) for k in range(m)}
    center = {(k, j): vid(("c", k, j)) for j in range(levels) for k in range(m)}
    apex_bot = vid(("apex", 0))
    apex_top = vid(("apex", 1))

    edges: dict = {}

    def add_edge(a, b, w=1.0):
        edges[tuple(sorted((a, b)))] = w

    for j in range(levels + 1):
        for k in range(m):
            add_edge(grid[(k, j)], grid[((k + 1) % m, j)])           # ring
    for j in range(levels):
        for k in range(m):
            add_edge(grid[(k, j)], grid[(k, j + 1)])                 # vertical
            c = center[(k, j)]
            k1 = (k + 1) % m
            for v in (grid[(k, j)], grid[(k1, j)], grid[(k1, j + 1)], grid[(k, j + 1)]):
                add_edge(v, c)                                       # spokes
    for k in range(m):
        add_edge(apex_bot, grid[(k, 0)])
        add_edge(apex_top, grid[(k, levels)])

    # the marked waist vertex; its link is the attachment ring
    mark = grid[(0, j0)]
    ring = (
        grid[(1, j0)], center[(0, j0)], grid[(0, j0 + 1)], center[(m - 1, j0)],
        grid[(m - 1, j0)], center[(m - 1, j0 - 1)], grid[(0, j0 - 1)],
        center[(0, j0 - 1)],
    )

    # heavy edges: the waist ring (hemisphere seam) plus the link spokes of
    # the marked vertex, so the small mode both exists and shows on the ring
    heavy_edges = set()
    for k in range(m):
        heavy_edges.add(tuple(sorted((grid[(k, j0)], grid[((k + 1) % m, j0)]))))
    rr = list(ring)
    for a, b in zip(rr, rr[1:] + rr[:1]):
        heavy_edges.add(tuple(sorted((a, b))))
    for e in heavy_edges:
        edges[e] = heavy

    tris: dict = {}

    def add_tri(a, b, c):
        t = tuple(sorted((a, b, c)))
        w = 1.0
        # triangles on heavy edges are heavy: kills circulation soft modes
        for x, y in ((t[0], t[1]), (t[0], t[2]), (t[1], t[2])):
            if (x, y) in heavy_edges:
                w = heavy
        tris[t] = w

    for j in range(levels):
        for k in range(m):
            c = center[(k, j)]
            k1 = (k + 1) % m
            corners = [grid[(k, j)], grid[(k1, j)], grid[(k1, j + 1)], grid[(k, j + 1)]]
            for a, b in zip(corners, corners[1:] + corners[:1]):
                add_tri(a, b, c)
    for k in range(m):
        k1 = (k + 1) % m
        add_tri(apex_bot, grid[(k, 0)], grid[(k1, 0)])
        add_tri(apex_top, grid[(k, levels)], grid[(k1, levels)])

    K = build_complex([
        [(v,) for v in sorted(labels.values())],
        sorted(edges),
        sorted(tris),
    ])
    W = WeightSystem(K, (
        np.ones(K.n_simplices(0)),
        np.array([edges[e] for e in sorted(edges)]),
        np.array([tris[t] for t in sorted(tris)]),
    ))

    # proper rotation about the horizontal axis through the marked vertex:
    # swaps the hemispheres (mode is odd) and half-turns the link ring
    vm = {}
    for (k, j), v in grid.items():
        vm[v] = grid[((-k) % m, levels - j)]
    for (k, j), v in center.items():
        vm[v] = center[((-k - 1) % m, levels - 1 - j)]
    vm[apex_bot] = apex_top
    vm[apex_top] = apex_bot
    upsilon = simplicial_map(K, vm)
    assert vm[mark] == mark

    return DumbbellGadget(complex=K, weights=W, n=3, degree=1, u=u,
                          ring=ring, involution=upsilon,
                          floor_c=0.05, volume_bound=80.0)


def check_odd_symmetry(gadget: DumbbellGadget, omega: Cochain,
                       gap_floor: float = 1e-8) -> int:
    """Sign of <pullback omega, omega>; -1 for the dumbbell's small mode.

    Requires the eigenvalue of ``omega`` to be simple: the coexact gap to
    its neighbours must exceed ``gap_floor`` (times the spectral radius).
    """
    spec = coexact_spectrum(gadget.complex, gadget.weights, omega.degree)
    w = gadget.weights
    norm2 = inner(w, omega, omega)
    op_vals = spec.values
    # Rayleigh quotient against the coexact spectrum locates the eigenvalue
    from .complex_core import laplacian
    L = laplacian(gadget.complex, gadget.weights, omega.degree).operator()
    mu = float(np.sum(w.w[omega.degree] * omega.values * (L @ omega.values)) / norm2)
    gaps = np.abs(op_vals - mu)
    order = np.argsort(gaps)
    scale = max(1.0, float(op_vals[-1]) if len(op_vals) else 1.0)
    if len(order) > 1 and gaps[order[1]] < gap_floor * scale:
        raise EigenvalueNotSimple(
            f"gap {gaps[order[1]]:.3g} below floor {gap_floor * scale:.3g}")
    pulled = pullback(gadget.involution, omega)
    overlap = inner(w, pulled, omega) / norm2
    if abs(abs(overlap) - 1.0) > 1e-6:
        raise EigenvalueNotSimple(
            f"mode is not an involution eigenvector (overlap {overlap:.6f})")
    return 1 if overlap > 0 else -1
