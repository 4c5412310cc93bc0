"""Exception hierarchy shared by all ensb modules."""


class EnsbError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EnsbError, ValueError):
    """Input lies outside the domain where a formula is defined."""


class SingularConfigurationError(DomainError):
    """A closed-form expression hits a vanishing denominator."""


class KinematicSingularityError(DomainError):
    """A cross-section denominator is non-positive for the requested geometry."""


class NumericalConsistencyError(EnsbError, ArithmeticError):
    """An identity that must hold exactly is violated beyond rounding."""


class ConvergenceError(EnsbError, ArithmeticError):
    """A series or quadrature did not reach its tolerance.

    ``partial`` carries the last partial result, ``bound`` the achieved
    error estimate.
    """

    def __init__(self, message, partial=None, bound=None):
        super().__init__(message)
        self.partial = partial
        self.bound = bound


class ConfigError(EnsbError):
    """Configuration failed validation; ``problems`` lists every violation."""

    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class AccuracyWarning(UserWarning):
    """Result computed outside the documented accuracy domain."""


class PhysicsRegimeWarning(UserWarning):
    """Parameters are valid but close to the edge of the model's regime."""
