"""Exception types shared across the package."""


class GeoPeriodError(Exception):
    """Base class for all errors raised by this package."""


class PoleError(GeoPeriodError, ValueError):
    """Argument lies on (or within tolerance of) a pole of a Gamma factor."""

    def __init__(self, message, factor=None):
        super().__init__(message)
        self.factor = factor


class DomainError(GeoPeriodError, ValueError):
    """Argument outside the documented domain of an operation."""


class NoConvergence(GeoPeriodError, RuntimeError):
    """Numerical procedure exhausted its budget.

    The best available estimate is attached as ``result`` when one exists.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DimensionError(GeoPeriodError, ValueError):
    """Requested quadrature dimension exceeds the supported limit."""


class ConvergenceRegionError(GeoPeriodError, ValueError):
    """Parameters outside the region where a defining integral converges."""


class HypothesisNotMet(GeoPeriodError):
    """Hypotheses of a checked statement do not hold for the given input."""
