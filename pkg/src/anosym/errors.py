"""Exception hierarchy for the anosym package."""


class AnosymError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(AnosymError):
    """Shapes or dimensions incompatible with the requested operation."""


class FieldError(AnosymError):
    """Operation requires the other base field (R vs C)."""


class ContractError(AnosymError):
    """An input violates a documented precondition (e.g. not symplectic)."""


class ConvergenceError(AnosymError):
    """An iteration failed to converge within its cap.

    Carries the residual reached at the cap in ``residual``.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class BudgetError(AnosymError):
    """Requested enumeration or scan exceeds the configured budget."""


class AlphabetError(AnosymError):
    """A word uses letters outside the presentation's alphabet."""


class NonProximalError(AnosymError):
    """Element has no usable spectral gap on the requested Grassmannian."""


class InconclusiveError(AnosymError):
    """Too little usable data: e.g. most sampled elements were non-proximal."""


class IllConditionedError(AnosymError):
    """Input is too close to a stratum boundary to classify reliably."""


class NotAGraphError(AnosymError):
    """Lagrangian in the doubled space is not the graph of a group element."""


class ConstructionError(AnosymError):
    """A representation constructor failed its own consistency check."""
