"""Exception taxonomy shared across the solver."""


class SphflowError(Exception):
    """Base class for all solver errors."""


class DomainError(SphflowError):
    """Argument outside the admissible domain of a pressure law or map."""


class EosValidationError(SphflowError):
    """A pressure law violates the structural assumptions of its declared kind."""


class LandmarkNotFound(SphflowError):
    """A required landmark bracket could not be established."""


class RootNotBracketed(SphflowError):
    """A root bracket expected from the landmark geometry is missing."""


class SonicSingularity(SphflowError):
    """ODE denominator within the sonic guard band; callers must treat as an event."""


class DegenerateParametrization(SphflowError):
    """Velocity parametrization requested at u too close to zero."""


class StepFailure(SphflowError):
    """Adaptive step controller underflowed (unexpectedly stiff region)."""


class InvalidChord(SphflowError):
    """Chord slope is non-negative where a shock requires a falling chord."""


class NoRoot(SphflowError):
    """No back state exists for the requested shock speed."""


class NoSignChange(SphflowError):
    """Shock family has no zero of the back velocity on any continuous branch."""


class EmptyFamily(SphflowError):
    """No point on the carrier admits an admissible shock."""


class WindowEmpty(SphflowError):
    """Rarefaction admissibility window is empty; case assumptions violated."""


class NoExit(SphflowError):
    """Constant-pressure traversal never reaches the requested edge density."""


class BracketInvalid(SphflowError):
    """Bisection bracket endpoints do not classify as expected."""


class ConstructionFailed(SphflowError):
    """Solution assembly failed; carries the event trace for diagnosis."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class ConfigError(SphflowError):
    """Malformed run configuration."""
