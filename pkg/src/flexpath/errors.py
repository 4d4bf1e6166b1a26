"""Exception hierarchy shared by every flexpath module."""


class FlexpathError(Exception):
    """Base class for all errors raised by flexpath."""


class InvalidArgumentError(FlexpathError, ValueError):
    """An argument violates a documented precondition."""


class OutOfRangeError(FlexpathError, ValueError):
    """A coordinate or time lies outside the admissible interval."""


class InvalidRotationError(FlexpathError, ValueError):
    """A rotation sample is not a proper orthogonal matrix."""


class NumericalFailureError(FlexpathError, RuntimeError):
    """A linear solve or factorization failed."""


class ConfigError(FlexpathError):
    """A run configuration could not be read or validated."""


class InfeasibleError(FlexpathError):
    """No trajectory duration in the search bounds satisfies the limits.

    The full scan table is kept on ``scan`` so callers can still report it.
    """

    def __init__(self, message, scan=()):
        super().__init__(message)
        self.scan = list(scan)
