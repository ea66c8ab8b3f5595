"""Exception and warning types shared across the package."""

from __future__ import annotations


class BosegasError(Exception):
    """Base class for all package errors."""


class InvalidPotential(BosegasError, ValueError):
    """Potential parameters violate the repulsive / finite-range contract."""


class NotConverged(BosegasError):
    """An iterative solve stopped at max_iter without meeting its tolerance."""

    def __init__(self, message: str, last_delta: float | None = None):
        super().__init__(message)
        self.last_delta = last_delta


class GridTooCoarse(BosegasError):
    """Refining the discretization moved the answer by more than the tolerance."""


class QuadratureError(BosegasError):
    """A quadrature failed its internal self-consistency check."""


class RegionUndefined(BosegasError):
    """A dispersion value was requested where none is defined (P0 or the gap)."""


class BudgetExceeded(BosegasError):
    """An enumeration grew past its configured budget."""


class ZeroConditionProbability(BosegasError):
    """A conditional statistic was requested on an event of probability zero."""


class IdentityViolation(BosegasError):
    """Input data fail an exact identity beyond the allowed tolerance."""


class ConfigInvalid(BosegasError, ValueError):
    """A run configuration failed validation."""


class DivergentIntegrand(BosegasError, ValueError):
    """A lattice summand evaluated to a non-finite value on an included mode."""


class DilutenessWarning(UserWarning):
    """The requested density is outside the dilute regime the expansion assumes."""
