"""Weighted simplicial cochain complexes.

A complex stores oriented simplices (strictly increasing vertex tuples) per
dimension together with signed boundary matrices.  A weight system attaches
one positive number to every simplex; it plays the role of a diagonal metric:
inner products, codifferentials, Laplacians, volume and the homothety action
are all expressed through it.

Conventions
-----------
* ``boundary[j]`` maps j-chains to (j-1)-chains, shape ``(N_{j-1}, N_j)``,
  entries from the alternating face formula, so ``boundary[j] @ boundary[j+1]``
  vanishes in integer arithmetic.
* The coboundary ``d_p`` acting on p-cochains is ``boundary[p+1].T``.
* The inner product on p-cochains is ``<a, b> = sum_s w_p(s) a(s) b(s)``.
* ``volume`` is the squared weighted norm of the constant function, i.e.
  the total vertex weight.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegreeMismatch,
    DegreeOutOfRange,
    DuplicateSimplex,
    MissingFace,
    NonpositiveScale,
    NotSimplicialMap,
    OrientationError,
)

Simplex = tuple[int, ...]


# ---------------------------------------------------------------------------
# complexes
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """Oriented simplices by dimension with signed boundary incidence."""

    top_dim: int
    simplices: tuple[tuple[Simplex, ...], ...]
    index: tuple[dict, ...]            # simplex tuple -> position, per dimension
    boundary: tuple[np.ndarray, ...]   # boundary[j]: (N_{j-1}, N_j) ints, j >= 1

    def n_simplices(self, j: int) -> int:
        if 0 <= j <= self.top_dim:
            return len(self.simplices[j])
        return 0

    def coboundary(self, p: int) -> np.ndarray:
        """Matrix of d_p : C^p -> C^{p+1} (float)."""
        if p < 0 or p > self.top_dim:
            raise DegreeOutOfRange(f"degree {p} outside [0, {self.top_dim}]")
        if p == self.top_dim:
            return np.zeros((0, self.n_simplices(p)))
        return self.boundary[p + 1].T.astype(float)

    def vertices(self) -> tuple[int, ...]:
        return tuple(s[0] for s in self.simplices[0])


def build_complex(simplex_lists) -> SimplicialComplex:
    """Build and validate a complex from vertex tuples per dimension.

    ``simplex_lists[j]`` holds the j-simplices as strictly increasing vertex
    tuples.  Every face of every simplex must be listed and no simplex may
    appear twice.  Raises :class:`OrientationError`, :class:`DuplicateSimplex`
    or :class:`MissingFace` accordingly.
    """
    if not simplex_lists or not simplex_lists[0]:
        raise MissingFace("complex needs at least one vertex")
    top_dim = len(simplex_lists) - 1

    simplices: list[tuple[Simplex, ...]] = []
    index: list[dict] = []
    for j, entries in enumerate(simplex_lists):
        seen: dict = {}
        cleaned = []
        for raw in entries:
            s = tuple(int(v) for v in raw)
            if len(s) != j + 1:
                raise OrientationError(f"{s} is not a {j}-simplex")
            if any(v < 0 for v in s):
                raise OrientationError(f"negative vertex label in {s}")
            if any(a >= b for a, b in zip(s, s[1:])):
                raise OrientationError(f"vertices of {s} not strictly increasing")
            if s in seen:
                raise DuplicateSimplex(f"{s} listed twice in dimension {j}")
            seen[s] = len(cleaned)
            cleaned.append(s)
        simplices.append(tuple(cleaned))
        index.append(seen)

    # face closure and signed boundary matrices
    boundary: list[np.ndarray] = [np.zeros((0, len(simplices[0])), dtype=np.int64)]
    for j in range(1, top_dim + 1):
        mat = np.zeros((len(simplices[j - 1]), len(simplices[j])), dtype=np.int64)
        for col, s in enumerate(simplices[j]):
            for i in range(j + 1):
                face = s[:i] + s[i + 1:]
                row = index[j - 1].get(face)
                if row is None:
                    raise MissingFace(f"face {face} of {s} missing from dimension {j - 1}")
                mat[row, col] = (-1) ** i
        boundary.append(mat)

    for j in range(1, top_dim):
        if np.any(boundary[j] @ boundary[j + 1]):
            raise OrientationError("boundary composed twice is nonzero")

    return SimplicialComplex(
        top_dim=top_dim,
        simplices=tuple(simplices),
        index=tuple(index),
        boundary=tuple(boundary),
    )


# ---------------------------------------------------------------------------
# weights and cochains
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class WeightSystem:
    """One positive weight per simplex; the discrete metric."""

    complex: SimplicialComplex
    w: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.w) != self.complex.top_dim + 1:
            raise DegreeOutOfRange("weight arrays must cover every dimension")
        for j, arr in enumerate(self.w):
            if arr.shape != (self.complex.n_simplices(j),):
                raise DegreeOutOfRange(f"weight array length mismatch in dimension {j}")
            if np.any(arr <= 0.0) or not np.all(np.isfinite(arr)):
                raise NonpositiveScale(f"weights in dimension {j} must be positive and finite")

    def replace(self, new_w) -> "WeightSystem":
        return WeightSystem(self.complex, tuple(np.asarray(a, dtype=float) for a in new_w))


def unit_weights(K: SimplicialComplex) -> WeightSystem:
    return WeightSystem(K, tuple(np.ones(K.n_simplices(j)) for j in range(K.top_dim + 1)))


@dataclass(frozen=True, eq=False)
class Cochain:
    """Real coefficients on the p-simplices of a fixed complex."""

    complex: SimplicialComplex
    degree: int
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.complex.n_simplices(self.degree),):
            raise DegreeOutOfRange("coefficient count must match the simplex count")


def inner(W: WeightSystem, a: Cochain, b: Cochain) -> float:
    if a.degree != b.degree:
        raise DegreeMismatch("cochain degrees differ")
    return float(np.sum(W.w[a.degree] * a.values * b.values))


def volume(W: WeightSystem) -> float:
    """Total vertex weight: the squared norm of the constant function 1."""
    return float(np.sum(W.w[0]))


def homothety(W: WeightSystem, c: float, n: int) -> WeightSystem:
    """Scale the metric: ``w[p] <- c**(n - 2p) * w[p]``.

    Every Laplace eigenvalue in every degree is multiplied by exactly
    ``c**-2`` and the volume by ``c**n``.
    """
    if not (c > 0.0) or not np.isfinite(c):
        raise NonpositiveScale(f"homothety factor must be positive, got {c}")
    return W.replace([c ** (n - 2 * p) * W.w[p] for p in range(len(W.w))])


# ---------------------------------------------------------------------------
# cochain systems and Laplacians
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CochainSystem:
    """Graded coboundaries plus diagonal weights, detached from any mesh.

    The spectral machinery only ever needs ``d_p`` matrices satisfying
    ``d_{p+1} d_p = 0`` and positive diagonal weights, so products and other
    synthetic complexes can reuse it through this container.
    """

    weights: tuple[np.ndarray, ...]
    coboundaries: tuple[np.ndarray, ...]   # coboundaries[p]: C^p -> C^{p+1}; top entry empty

    @property
    def top_dim(self) -> int:
        return len(self.weights) - 1

    def dim(self, p: int) -> int:
        if 0 <= p <= self.top_dim:
            return len(self.weights[p])
        return 0

    def d(self, p: int) -> np.ndarray:
        if p < 0 or p > self.top_dim:
            raise DegreeOutOfRange(f"degree {p} outside [0, {self.top_dim}]")
        return self.coboundaries[p]


def system_of(K: SimplicialComplex, W: WeightSystem) -> CochainSystem:
    cobs = tuple(K.coboundary(p) for p in range(K.top_dim + 1))
    return CochainSystem(weights=tuple(W.w), coboundaries=cobs)


@dataclass(frozen=True, eq=False)
class HodgeOperator:
    """Symmetrized Hodge Laplacian ``S_p = W^1/2 L_p W^-1/2`` in degree p.

    ``s_up`` and ``s_down`` are the symmetrized up (coexact-side) and down
    (exact-side) parts; both are positive semi-definite and annihilate each
    other, so the nonzero spectrum of ``s`` splits between them.
    """

    degree: int
    weights: np.ndarray
    s_up: np.ndarray
    s_down: np.ndarray

    @property
    def s(self) -> np.ndarray:
        return self.s_up + self.s_down

    def operator(self) -> np.ndarray:
        """Non-symmetric form ``L_p = W^-1/2 S_p W^1/2`` acting on cochains."""
        r = np.sqrt(self.weights)
        return (self.s / r[:, None]) * r[None, :]

    def eigensystem(self):
        """Eigenvalues (ascending) and W-orthonormal eigencochain columns."""
        vals, vecs = np.linalg.eigh(self.s)
        cochains = vecs / np.sqrt(self.weights)[:, None]
        return vals, cochains

    def eigenvalues(self) -> np.ndarray:
        return np.sort(np.linalg.eigvalsh(self.s))

    def kernel_dim(self, rel_tol: float = 1e-11) -> int:
        vals = self.eigenvalues()
        scale = max(1.0, float(vals[-1]) if len(vals) else 1.0)
        return int(np.sum(np.abs(vals) <= rel_tol * scale))


def _laplacian_parts(system: CochainSystem, p: int):
    if p < 0 or p > system.top_dim:
        raise DegreeOutOfRange(f"degree {p} outside [0, {system.top_dim}]")
    n = system.dim(p)
    wp = system.weights[p]
    root = np.sqrt(wp)

    if p < system.top_dim and system.dim(p + 1) > 0:
        d = system.d(p)
        a = (np.sqrt(system.weights[p + 1])[:, None] * d) / root[None, :]
        s_up = a.T @ a
    else:
        s_up = np.zeros((n, n))

    if p > 0 and system.dim(p - 1) > 0:
        d_prev = system.d(p - 1)   # C^{p-1} -> C^p, shape (N_p, N_{p-1})
        b = (root[:, None] * d_prev) / np.sqrt(system.weights[p - 1])[None, :]
        s_down = b @ b.T
    else:
        s_down = np.zeros((n, n))

    s_up = 0.5 * (s_up + s_up.T)
    s_down = 0.5 * (s_down + s_down.T)
    return s_up, s_down


def laplacian_of_system(system: CochainSystem, p: int) -> HodgeOperator:
    s_up, s_down = _laplacian_parts(system, p)
    return HodgeOperator(degree=p, weights=np.asarray(system.weights[p], dtype=float),
                         s_up=s_up, s_down=s_down)


def laplacian(K: SimplicialComplex, W: WeightSystem, p: int) -> HodgeOperator:
    """Hodge Laplacian on p-cochains in symmetrized form."""
    return laplacian_of_system(system_of(K, W), p)


def betti(K: SimplicialComplex) -> tuple[int, ...]:
    """Betti numbers from incidence ranks (rank-nullity, weight independent)."""
    ranks = [0]
    for j in range(1, K.top_dim + 1):
        mat = K.boundary[j]
        ranks.append(int(np.linalg.matrix_rank(mat.astype(float))) if mat.size else 0)
    ranks.append(0)
    return tuple(
        K.n_simplices(j) - ranks[j] - ranks[j + 1] for j in range(K.top_dim + 1)
    )


# ---------------------------------------------------------------------------
# simplicial maps and pullback
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SimplicialMap:
    """A self-map of a complex that is bijective on simplices of every dimension.

    ``perm[p][i]`` is the index of the image of p-simplex ``i`` and
    ``sign[p][i]`` the parity of the vertex sort that orients it.
    """

    complex: SimplicialComplex
    vertex_map: dict
    perm: tuple[np.ndarray, ...]
    sign: tuple[np.ndarray, ...]

    def compose(self, other: "SimplicialMap") -> "SimplicialMap":
        vm = {v: self.vertex_map[other.vertex_map[v]] for v in other.vertex_map}
        return simplicial_map(self.complex, vm)

    def is_involution(self) -> bool:
        c = self.compose(self)
        return all(np.array_equal(c.perm[p], np.arange(len(c.perm[p])))
                   and np.all(c.sign[p] == 1) for p in range(self.complex.top_dim + 1))

    def preserves_weights(self, W: WeightSystem, rel_tol: float = 1e-12) -> bool:
        for p in range(self.complex.top_dim + 1):
            w = W.w[p]
            if len(w) and np.max(np.abs(w[self.perm[p]] - w)) > rel_tol * np.max(w):
                return False
        return True


def _perm_sign(values) -> int:
    """Parity of the permutation sorting ``values`` (distinct entries)."""
    order = sorted(range(len(values)), key=values.__getitem__)
    sign, seen = 1, [False] * len(order)
    for start in range(len(order)):
        if seen[start]:
            continue
        length, j = 0, start
        while not seen[j]:
            seen[j] = True
            j = order[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def simplicial_map(K: SimplicialComplex, vertex_map: dict) -> SimplicialMap:
    """Validate a vertex map and precompute its induced simplex permutations."""
    verts = K.vertices()
    missing = [v for v in verts if v not in vertex_map]
    if missing:
        raise NotSimplicialMap(f"vertex map undefined on {missing[:5]}")

    perms, signs = [], []
    for p in range(K.top_dim + 1):
        n = K.n_simplices(p)
        perm = np.empty(n, dtype=np.int64)
        sign = np.empty(n, dtype=np.int64)
        for i, s in enumerate(K.simplices[p]):
            image = [vertex_map[v] for v in s]
            if len(set(image)) != len(image):
                raise NotSimplicialMap(f"{s} collapses under the vertex map")
            target = tuple(sorted(image))
            j = K.index[p].get(target)
            if j is None:
                raise NotSimplicialMap(f"image {target} of {s} is not a simplex")
            perm[i] = j
            sign[i] = _perm_sign(image)
        if len(np.unique(perm)) != n:
            raise NotSimplicialMap(f"map is not injective on {p}-simplices")
        perms.append(perm)
        signs.append(sign)
    return SimplicialMap(complex=K, vertex_map=dict(vertex_map),
                         perm=tuple(perms), sign=tuple(signs))


def pullback(f: SimplicialMap, phi: Cochain) -> Cochain:
    """``(f* phi)(s) = sign(f, s) * phi(f(s))``; commutes with d."""
    if phi.complex is not f.complex:
        raise NotSimplicialMap("cochain lives on a different complex")
    p = phi.degree
    return Cochain(phi.complex, p, f.sign[p] * phi.values[f.perm[p]])


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def to_json_dict(K: SimplicialComplex, W: WeightSystem | None = None) -> dict:
    payload = {
        "top_dim": K.top_dim,
        "simplices": {str(j): [list(s) for s in K.simplices[j]]
                      for j in range(K.top_dim + 1)},
    }
    if W is not None:
        payload["weights"] = {str(j): [float(x) for x in W.w[j]]
                              for j in range(K.top_dim + 1)}
    return payload


def from_json_dict(payload: dict):
    """Returns ``(complex, weights)``; weights default to 1 when absent."""
    top_dim = int(payload["top_dim"])
    lists = [payload["simplices"].get(str(j), []) for j in range(top_dim + 1)]
    K = build_complex(lists)
    if "weights" in payload:
        w = tuple(np.asarray(payload["weights"][str(j)], dtype=float)
                  for j in range(top_dim + 1))
        return K, WeightSystem(K, w)
    return K, unit_weights(K)


def save_complex(path, K: SimplicialComplex, W: WeightSystem | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(K, W), fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_complex(path):
    with open(path, encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))
