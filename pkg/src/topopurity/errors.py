"""Exception hierarchy shared across the package."""


class TopoPurityError(Exception):
    """Base class for all package errors."""


class ConfigurationError(TopoPurityError, ValueError):
    """Invalid lattice, geometry or experiment configuration."""


class LatticeMismatchError(TopoPurityError, ValueError):
    """Two objects were built on different lattices."""


class BoundaryUndefinedError(TopoPurityError, ValueError):
    """Boundary statistics requested for an empty or full region."""


class BudgetExceededError(TopoPurityError, RuntimeError):
    """A term-count or memory budget was exceeded.

    Attributes
    ----------
    step : int or None
        Index of the processing step that blew the budget, when known.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class OracleError(TopoPurityError, RuntimeError):
    """A purity oracle failed on a specific region."""

    def __init__(self, message, region=None):
        super().__init__(message)
        self.region = region


class DeformationError(TopoPurityError, ValueError):
    """A boundary deformation does not satisfy the local-deformation precondition."""
