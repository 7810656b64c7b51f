"""Coexact Hodge spectra on weighted simplicial complexes.

Modules
-------
complex_core   complexes, weights, Laplacians, homothety, pullback, JSON I/O
spectral       coexact spectra, consistency checks, windows, subspace distance
gluing         thin-handle attachment, union-spectrum scans, dumbbell gadgets
diabolo        two-parameter families, winding/holonomy certificates,
               degeneracy search, double-eigenvalue metrics
prescribe      spectrum prescription, graded tensor products, high multiplicity
cli            batch front-end
"""

from .complex_core import (
    Cochain,
    HodgeOperator,
    SimplicialComplex,
    SimplicialMap,
    WeightSystem,
    betti,
    build_complex,
    from_json_dict,
    homothety,
    laplacian,
    load_complex,
    pullback,
    save_complex,
    simplicial_map,
    to_json_dict,
    unit_weights,
    volume,
)
from .spectral import (
    CoexactSpectrum,
    SpectralWindow,
    coexact_from_full,
    coexact_spectrum,
    full_spectrum,
    hodge_consistency,
    spectral_window,
    subspace_distance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
