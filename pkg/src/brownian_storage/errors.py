"""Exception types raised across the package."""


class BrownianStorageError(Exception):
    """Base class for all package errors."""


class NonPositiveDrainRate(BrownianStorageError, ValueError):
    """The drain rate must be strictly positive for a stable queue."""


class DomainError(BrownianStorageError, ValueError):
    """An argument lies outside the domain of a formula."""


class HorizonExceeded(BrownianStorageError, RuntimeError):
    """A first-passage simulation hit its time cap before reaching zero."""


class NoConvergence(BrownianStorageError, RuntimeError):
    """An iterative routine exhausted its iteration budget."""


class QuadratureFailure(BrownianStorageError, RuntimeError):
    """Two quadrature routes for the same quantity disagree."""


class InfeasibleGrid(BrownianStorageError, ValueError):
    """A Monte Carlo grid point cannot be estimated at the requested budget."""
