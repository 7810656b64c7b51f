"""Eigen-decompositions, coexact spectra, spectral windows, subspace distances.

The coexact spectrum in degree p is the nonzero spectrum of the up-part
``delta_{p+1} d_p``; its eigencochains lie in the image of the codifferential.
The nonzero spectrum of the full Laplacian splits as the disjoint union of
the coexact spectra in degrees p-1 and p, with the kernel counting the Betti
number.  ``hodge_consistency`` asserts exactly that split.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .complex_core import (
    CochainSystem,
    SimplicialComplex,
    WeightSystem,
    betti,
    laplacian_of_system,
    system_of,
)
from .errors import (
    ConsistencyViolation,
    DegreeOutOfRange,
    DimensionMismatch,
    EndpointTooCloseToSpectrum,
    InconsistentSpectra,
)

# eigenvalues below ZERO_REL * spectral_radius count as kernel
ZERO_REL = 1e-11
# multiset comparisons run at this absolute tolerance after normalizing
# the operator to unit spectral radius
MULTISET_TOL = 1e-9


# ---------------------------------------------------------------------------
# coexact spectra
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CoexactSpectrum:
    """Sorted positive eigenvalues on coexact p-cochains with eigenbasis."""

    degree: int
    values: np.ndarray           # ascending, strictly positive
    cochains: np.ndarray         # (N_p, k) columns, W-orthonormal
    weights: np.ndarray          # diagonal weights of degree p

    def __len__(self) -> int:
        return len(self.values)


def _zero_cut(vals: np.ndarray) -> float:
    scale = max(1.0, float(vals[-1])) if len(vals) else 1.0
    return ZERO_REL * scale


def coexact_spectrum_of_system(system: CochainSystem, p: int) -> CoexactSpectrum:
    if p < 0 or p > system.top_dim:
        raise DegreeOutOfRange(f"degree {p} outside [0, {system.top_dim}]")
    op = laplacian_of_system(system, p)
    vals, vecs = np.linalg.eigh(op.s_up)
    cut = _zero_cut(vals)
    keep = vals > cut
    cochains = vecs[:, keep] / np.sqrt(op.weights)[:, None]
    return CoexactSpectrum(degree=p, values=vals[keep], cochains=cochains,
                           weights=op.weights)


def coexact_spectrum(K: SimplicialComplex, W: WeightSystem, p: int) -> CoexactSpectrum:
    """Coexact eigenvalues in degree p (empty at the top dimension)."""
    return coexact_spectrum_of_system(system_of(K, W), p)


def full_spectrum(K: SimplicialComplex, W: WeightSystem, p: int) -> np.ndarray:
    """All eigenvalues of the degree-p Laplacian, ascending."""
    from .complex_core import laplacian
    return laplacian(K, W, p).eigenvalues()


# ---------------------------------------------------------------------------
# consistency of the spectral bookkeeping
# ---------------------------------------------------------------------------

def match_multisets(a, b, tol: float = MULTISET_TOL):
    """Match two sorted value lists pairwise after unit-radius normalization.

    Returns the maximum absolute deviation (normalized scale); raises
    :class:`InconsistentSpectra` when the lists differ in length or a pair
    exceeds ``tol``.
    """
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    if len(a) != len(b):
        raise InconsistentSpectra(f"multiset sizes differ: {len(a)} vs {len(b)}")
    if len(a) == 0:
        return 0.0
    scale = max(1.0, float(np.max(np.abs(a))), float(np.max(np.abs(b))))
    dev = np.abs(a - b) / scale
    worst = int(np.argmax(dev))
    if dev[worst] > tol:
        raise InconsistentSpectra(
            f"values {a[worst]:.12g} and {b[worst]:.12g} differ beyond tolerance")
    return float(np.max(dev))


@dataclass(frozen=True)
class ConsistencyReport:
    degree: int
    n_nonzero: int
    kernel_dim: int
    betti_number: int
    max_deviation: float
    passed: bool

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "n_nonzero": self.n_nonzero,
            "kernel_dim": self.kernel_dim,
            "betti_number": self.betti_number,
            "max_deviation": self.max_deviation,
            "passed": self.passed,
        }


def hodge_consistency(K: SimplicialComplex, W: WeightSystem, p: int) -> ConsistencyReport:
    """Check nonzero spec(L_p) = coexact(p-1) + coexact(p) and ker = b_p."""
    from .complex_core import laplacian
    vals = laplacian(K, W, p).eigenvalues()
    cut = _zero_cut(vals)
    nonzero = vals[vals > cut]
    kernel = int(np.sum(vals <= cut))

    expected = np.concatenate([
        coexact_spectrum(K, W, p - 1).values if p >= 1 else np.empty(0),
        coexact_spectrum(K, W, p).values,
    ])
    try:
        dev = match_multisets(nonzero, expected)
    except InconsistentSpectra as exc:
        raise ConsistencyViolation(
            f"degree {p}: nonzero spectrum does not split into coexact parts ({exc})",
            offending=None) from exc

    b = betti(K)[p]
    if kernel != b:
        raise ConsistencyViolation(
            f"degree {p}: kernel dimension {kernel} != Betti number {b}",
            offending=0.0)
    return ConsistencyReport(degree=p, n_nonzero=len(nonzero), kernel_dim=kernel,
                             betti_number=b, max_deviation=dev, passed=True)


def coexact_from_full(full_by_degree, betti_numbers, tol: float = MULTISET_TOL):
    """Recover coexact spectra from full spectra, recursively from degree 0.

    ``coex_p = full_p  minus  {0 with multiplicity b_p}  minus  coex_{p-1}``.
    Raises :class:`InconsistentSpectra` when the subtraction fails.
    """
    full_by_degree = [np.sort(np.asarray(v, dtype=float)) for v in full_by_degree]
    scale = max([1.0] + [float(np.max(v)) for v in full_by_degree if len(v)])
    out = []
    prev = np.empty(0)
    for p, vals in enumerate(full_by_degree):
        remaining = list(vals)
        b = int(betti_numbers[p])
        for _ in range(b):
            if not remaining or abs(remaining[0]) > tol * scale:
                raise InconsistentSpectra(
                    f"degree {p}: fewer than {b} zero eigenvalues present")
            remaining.pop(0)
        for mu in prev:
            k = int(np.argmin([abs(r - mu) for r in remaining])) if remaining else -1
            if k < 0 or abs(remaining[k] - mu) > tol * scale:
                raise InconsistentSpectra(
                    f"degree {p}: expected coexact value {mu:.12g} absent from full spectrum")
            remaining.pop(k)
        coex = np.asarray(remaining)
        if np.any(coex <= tol * scale):
            raise InconsistentSpectra(f"degree {p}: leftover near-zero values {coex[:3]}")
        out.append(coex)
        prev = coex
    return out


# ---------------------------------------------------------------------------
# spectral windows and subspace distance
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpectralWindow:
    """Eigenpairs with eigenvalue strictly inside an open interval."""

    degree: int
    interval: tuple[float, float]
    values: np.ndarray
    cochains: np.ndarray        # (N_p, k), W-orthonormal columns
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


def spectral_window(K: SimplicialComplex, W: WeightSystem, p: int, interval,
                    part: str = "coexact", margin: float = 1e-8) -> SpectralWindow:
    """Eigenpairs of degree p inside the open interval.

    ``part`` selects the coexact spectrum (default: the currency of every
    construction here) or the full Laplace spectrum.  Both endpoints must
    stay at least ``margin * max(1, spectral radius)`` away from every
    eigenvalue of the selected operator.
    """
    a, b = float(interval[0]), float(interval[1])
    if not a < b:
        raise EndpointTooCloseToSpectrum(f"window ({a}, {b}) is empty")
    if part == "coexact":
        spec = coexact_spectrum(K, W, p)
        vals, vecs, wts = spec.values, spec.cochains, spec.weights
    elif part == "full":
        from .complex_core import laplacian
        op = laplacian(K, W, p)
        vals, vecs = op.eigensystem()
        wts = op.weights
    else:
        raise ValueError(f"unknown part {part!r}")

    guard = margin * max(1.0, float(vals[-1]) if len(vals) else 1.0)
    for endpoint in (a, b):
        if len(vals) and np.min(np.abs(vals - endpoint)) < guard:
            raise EndpointTooCloseToSpectrum(
                f"endpoint {endpoint:.12g} within {guard:.3g} of the spectrum")
    keep = (vals > a) & (vals < b)
    return SpectralWindow(degree=p, interval=(a, b), values=vals[keep],
                          cochains=vecs[:, keep], weights=wts)


def _orthonormal_columns(mat: np.ndarray) -> np.ndarray:
    if mat.size == 0:
        return mat.reshape(mat.shape[0], 0)
    q, r = np.linalg.qr(mat)
    keep = np.abs(np.diag(r)) > 1e-12 * max(1.0, float(np.max(np.abs(r))))
    return q[:, keep]


def subspace_distance(E: np.ndarray, F: np.ndarray, weights=None) -> float:
    """Sine of the largest principal angle between two column spans.

    Columns are vectors in one ambient space; ``weights`` (diagonal) selects
    the inner product.  With unequal dimensions the angle is taken over the
    smaller space and a :class:`DimensionMismatch` warning is emitted.
    """
    E = np.atleast_2d(np.asarray(E, dtype=float))
    F = np.atleast_2d(np.asarray(F, dtype=float))
    if E.ndim != 2 or F.ndim != 2 or E.shape[0] != F.shape[0]:
        raise ValueError("subspaces must share one ambient space")
    if weights is not None:
        root = np.sqrt(np.asarray(weights, dtype=float))[:, None]
        E = E * root
        F = F * root
    qe = _orthonormal_columns(E)
    qf = _orthonormal_columns(F)
    if qe.shape[1] != qf.shape[1]:
        warnings.warn("subspace dimensions differ; distance over the smaller space",
                      DimensionMismatch, stacklevel=2)
    if qe.shape[1] == 0 or qf.shape[1] == 0:
        return 0.0
    cos = np.linalg.svd(qe.T @ qf, compute_uv=False)
    k = min(qe.shape[1], qf.shape[1])
    smallest = float(np.clip(cos[k - 1], -1.0, 1.0))
    return float(np.sqrt(max(0.0, 1.0 - smallest * smallest)))
