"""Exception types shared across the package."""


class UnfalsifyError(Exception):
    """Base class for all library-specific errors."""


class InvalidModelError(UnfalsifyError, ValueError):
    """Model matrices have inconsistent dimensions or non-finite entries."""


class InvalidDataError(UnfalsifyError, ValueError):
    """Data set is malformed or does not match the model dimensions."""


class SingularMatrixError(UnfalsifyError):
    """A matrix required to be invertible is (numerically) singular."""


class InconsistentSystemError(UnfalsifyError):
    """An equality system that must be consistent has no solution."""


class UnboundedOmegaError(UnfalsifyError):
    """The set of permissible uncertainty trajectories is unbounded, so no
    covering uncertainty set exists."""


class SolverFailureError(UnfalsifyError):
    """A subsolver failed for a reason other than infeasibility."""
