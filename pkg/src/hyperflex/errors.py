"""Exception hierarchy shared by all modules."""


class HyperflexError(Exception):
    """Base class for all errors raised by this package."""


class UnsupportedDimensionError(HyperflexError):
    """Operation requires a specific genus (usually g=3)."""


class InvalidElementError(HyperflexError):
    """Matrix is not symplectic, or a group element fails validation."""


class InvalidBoundaryLabelError(HyperflexError):
    """Boundary label n must be a nonzero vector."""


class InvalidSubspaceError(HyperflexError):
    """Pair of vectors does not span a 2-dimensional symplectic subspace."""


class UnsupportedOrbitError(HyperflexError):
    """Pair (m, n) with m + n = 0; no vanishing-order table applies."""


class InternalConsistencyError(HyperflexError):
    """A structural guarantee failed; indicates a bug, not bad input."""


class DomainError(HyperflexError):
    """Input outside the mathematical domain (e.g. Im(tau) not positive definite)."""


class PrecisionExhaustedError(HyperflexError):
    """Requested tolerance unreachable within the configured truncation cap."""


class HyperellipticProximityError(HyperflexError):
    """tau too close to the vanishing locus of an even theta constant."""


class DegenerateLineError(HyperflexError):
    """Linear form has no coefficient above the degeneracy threshold."""


class LineOnCurveError(HyperflexError):
    """Restriction of the quartic to the line is numerically zero."""


class RootNotBracketedError(HyperflexError):
    """No sign structure found in the requested bracket."""


class MissingOrderError(HyperflexError):
    """A symbol in the expression has no assigned vanishing order."""


class MixedWeightError(HyperflexError):
    """Expression is not homogeneous in modular weight."""


class InconclusiveFitError(HyperflexError):
    """Numeric order fit did not converge or did not land on the snapping grid."""


class ResourceBudgetError(HyperflexError):
    """Symbolic expansion exceeded the configured monomial budget."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats or {}
