"""Exception types raised across the package."""


class MeasurementError(ValueError):
    """Base class for all package errors."""


class DimensionError(MeasurementError):
    pass


class NotHermitianError(MeasurementError):
    pass


class NotUnitaryError(MeasurementError):
    pass


class NotNormalizedError(MeasurementError):
    pass


class SpectrumError(MeasurementError):
    """An outcome value is not in the spectrum of the relevant observable."""


class ZeroProbabilityOutcome(MeasurementError):
    """The posterior state is undefined because the outcome has probability zero."""

    def __init__(self, outcome: float, probability: float):
        self.outcome = outcome
        self.probability = probability
        super().__init__(
            f"zero-probability outcome {outcome:+g} (Pr = {probability:.3e})")


class ContextMismatch(MeasurementError):
    """Hyperscalars built over different gain-symbol contexts were combined."""


class NotMonomialError(MeasurementError):
    pass


class InfiniteValueError(MeasurementError):
    """A standard part was requested for an infinite hyperscalar."""
