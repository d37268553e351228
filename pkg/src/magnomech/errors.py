"""Exception types shared across the package."""


class MagnomechError(Exception):
    """Base class for all package-specific errors."""


class DomainError(MagnomechError, ValueError):
    """An argument lies outside the physically allowed domain."""


class ConfigError(MagnomechError, ValueError):
    """A configuration file or sweep specification is invalid."""


class StabilityError(MagnomechError):
    """An operation requiring a stable drift matrix was called on an unstable one."""


class SingularPointError(MagnomechError):
    """A closed-form steady-state expression has a vanishing denominator.

    The message names the expression whose denominator vanished.
    """


class ConvergenceError(MagnomechError):
    """The self-consistent mean-field iteration did not converge."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SolverError(MagnomechError):
    """A numerical solve finished but failed its verification contract."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class PhysicalityError(MagnomechError):
    """A covariance matrix violates a physicality condition.

    The message names the violated condition.
    """
