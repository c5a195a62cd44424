"""Exception types shared across the package."""


class CurveCountError(Exception):
    """Base class for all library errors."""


class UnsupportedModelError(CurveCountError):
    """The requested surface is not one of the two supported models."""


class InvalidSpecError(CurveCountError):
    """Surface data that is not hyperbolic (nonnegative Euler characteristic)."""


class CoordinateError(CurveCountError):
    """Invalid multicurve coordinates (parity, sign conventions, emptiness)."""


class NormError(CurveCountError):
    """Norm misuse: model mismatch or a degenerate (unbounded-ball) norm."""


class WordError(CurveCountError):
    """Bad word input: trivial class, non-primitive slope, alphabet mismatch."""


class HolonomyError(CurveCountError):
    """Holonomy construction or evaluation failure."""


class BudgetExceededError(CurveCountError):
    """A configured enumeration/search budget was hit before completion.

    Carries whatever partial progress information the caller can report;
    results are never silently truncated.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class TracingError(CurveCountError):
    """Internal inconsistency in curve tracing (a bug, not a user error)."""


class ConfigError(CurveCountError):
    """Experiment configuration could not be parsed or validated."""
