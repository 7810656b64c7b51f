"""Exception and warning types shared across the toolkit."""


class HodgelabError(Exception):
    """Base class for all toolkit errors."""


# --- complex construction and validation ---

class MissingFace(HodgelabError):
    """A simplex references a face that is not in the complex."""


class DuplicateSimplex(HodgelabError):
    """The same simplex appears twice in one dimension."""


class OrientationError(HodgelabError):
    """A vertex tuple is not strictly increasing."""


class DegreeOutOfRange(HodgelabError):
    """Requested cochain degree does not exist on this complex."""


class NonpositiveScale(HodgelabError):
    """Homothety factor must be strictly positive."""


class NotSimplicialMap(HodgelabError):
    """Vertex map does not induce a simplex bijection in every dimension."""


# --- spectral bookkeeping ---

class ConsistencyViolation(HodgelabError):
    """Nonzero Laplace spectrum does not split into the two coexact parts."""

    def __init__(self, message, offending=None):
        super().__init__(message)
        self.offending = offending


class InconsistentSpectra(HodgelabError):
    """Multiset subtraction of spectra failed within tolerance."""


class EndpointTooCloseToSpectrum(HodgelabError):
    """A window endpoint sits within the declared margin of an eigenvalue."""


class DimensionMismatch(UserWarning):
    """Subspace distance requested between spaces of unequal dimension."""


# --- gluing ---

class SiteDimensionMismatch(HodgelabError):
    """Attachment site pair mixes simplices of different dimensions."""


class DegreeMismatch(HodgelabError):
    """Spectra of different degrees cannot be merged."""


class WindowTouchesSpectrum(HodgelabError):
    """Scan window endpoint collides with the decoupled spectrum."""


class UnsupportedDegree(HodgelabError):
    """No dumbbell recipe is shipped for this (n, p) pair."""


class EigenvalueNotSimple(HodgelabError):
    """Operation requires a simple eigenvalue but the gap is below floor."""


# --- degeneracy search ---

class WindowPollution(HodgelabError):
    """A third eigenvalue entered the tracking window; decrease epsilon."""


class DegenerateOverlap(HodgelabError):
    """Window subspace is nearly orthogonal to the reference plane."""


class GuardViolated(HodgelabError):
    """A boundary sample came too close to the degenerate form."""


class RefinementBudgetExceeded(HodgelabError):
    """Adaptive bisection did not resolve the curve within budget."""


class NoCertificate(HodgelabError):
    """Boundary winding is zero; no degeneracy is certified inside."""


class BoundaryDegeneracy(HodgelabError):
    """Degeneracy sits on a split line and retries were exhausted."""


class GapCollapsedOnLoop(HodgelabError):
    """Eigenvalue gap fell below floor while transporting an eigenline."""


# --- prescription ---

class TargetsTooClose(HodgelabError):
    """Target spectrum violates the multiplicity-two / separation rules."""


class NonConvergence(HodgelabError):
    """Fixed-point retuning did not reach tolerance within budget."""


class VolumeBudgetExceeded(HodgelabError):
    """Construction cannot meet the requested volume bound."""
