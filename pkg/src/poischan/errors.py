"""Exception types for numerical failure modes."""


class NumericalError(RuntimeError):
    """Base class for numerical failures; carries a partial result when available."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class SeriesConvergenceError(NumericalError):
    """A series sum hit its term cap before meeting the tail-mass bound."""


class QuadratureConvergenceError(NumericalError):
    """Adaptive subdivision hit its depth limit before meeting the tolerance."""


class IntegralDivergenceError(NumericalError):
    """A semi-infinite integrand failed to decay."""


class ConsistencyError(NumericalError):
    """Two internal routes to the same quantity disagreed beyond tolerance."""


class TranscriptionError(NumericalError):
    """A closed-form expression disagrees with its defining integral."""
