"""Exception hierarchy shared across the package."""


class TNIndexError(Exception):
    """Base class for all package errors."""


class ChartError(TNIndexError):
    """Point lies on (or too close to) the singular axis of the active
    monopole gauge chart; evaluate in the complementary chart instead."""


class GenericityError(TNIndexError):
    """A holonomy parameter is too close to an integer for the boundary
    family to be invertible."""


class IsotropyError(TNIndexError):
    """Angular samples of a supposedly cohomogeneity-one density disagree,
    which signals a metric or field implementation bug."""


class ConvergenceError(TNIndexError):
    """A quadrature or series evaluation failed to meet its tolerance."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = history or []


class ConsistencyError(TNIndexError):
    """An internal algebraic identity failed beyond tolerance."""


class DomainError(TNIndexError):
    """Input outside the valid domain (e.g. a stencil crossing r = 0)."""
