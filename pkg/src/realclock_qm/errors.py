"""Exception hierarchy shared across the package.

Config-time problems raise :class:`ConfigError`; everything else derives
from :class:`RealClockQMError` so callers (and the CLI exit-code mapping)
can distinguish numeric failures from I/O failures.
"""


class RealClockQMError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(RealClockQMError):
    """An input value violates a documented invariant."""


class DimensionMismatchError(ValidationError):
    """Operands have incompatible matrix dimensions."""


class UnsupportedClockKindError(RealClockQMError):
    """The requested operation is not defined for this clock kind."""


class ClockDomainError(RealClockQMError):
    """Clock evaluated outside its domain (e.g. at or past its horizon)."""


class InsufficientGridError(RealClockQMError):
    """The quadrature grid does not resolve or cover the integrand."""


class GridConvergenceError(RealClockQMError):
    """Enlarging the time grid still changes the result beyond tolerance."""


class ClockFoldingError(RealClockQMError):
    """The clock reading is not monotone over the integration grid."""


class IntegrationFailureError(RealClockQMError):
    """A stepper produced a state violating its invariants."""


class DegenerateStateError(RealClockQMError):
    """A state with (numerically) zero trace was used as a probability weight."""


class ResourceLimitError(RealClockQMError):
    """Problem size exceeds the documented resource limit."""


class UndefinedCoherenceError(RealClockQMError):
    """Coherence factor is undefined because a*conj(b) vanishes."""


class InvalidCoherenceError(RealClockQMError):
    """A coherence factor with |z| > 1 would break positivity."""


class NonCommutingObservableError(RealClockQMError):
    """Observable does not commute with the Hamiltonian."""

    def __init__(self, message: str, commutator_norm: float):
        super().__init__(message)
        self.commutator_norm = commutator_norm


class ConfigError(RealClockQMError):
    """CLI configuration is malformed or inconsistent."""
