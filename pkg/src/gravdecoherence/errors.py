"""Exception and warning types shared across the package."""


class GravDecoherenceError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(GravDecoherenceError, ValueError):
    """An argument violates an operation's precondition."""


class DomainError(GravDecoherenceError, ValueError):
    """A position lies outside the valid domain of a metric profile."""


class DegenerateStateError(GravDecoherenceError):
    """The internal trace A(x, x'; 0) vanishes, so the visibility is undefined."""


class NoDephasingError(GravDecoherenceError):
    """The redshift difference (or its gradient) is zero; coherence never changes."""


class PrecisionWarning(UserWarning):
    """A finite difference was taken with a step too small to resolve the phase change."""
