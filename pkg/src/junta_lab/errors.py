"""Exception types shared across the package."""


class JuntaLabError(Exception):
    pass


class ResourceLimitError(JuntaLabError):
    """A requested size exceeds a configured desk-scale bound."""


class ValidationError(JuntaLabError, ValueError):
    """Input data fails a structural check (e.g. a matrix that is not unitary)."""


class CalibrationError(JuntaLabError):
    pass


class NumericalError(JuntaLabError):
    """Two routes to the same quantity disagree beyond tolerance."""
