"""Exception hierarchy shared across the package."""


class CgdaError(Exception):
    """Base class for all package errors."""


class NonPositiveDuration(CgdaError):
    """Action duration or goal spacing is not strictly positive."""


class DegenerateAction(CgdaError):
    """Action too short to contain a single intermediate goal."""


class TooFewSamples(CgdaError):
    """Demonstration has fewer than two samples."""


class EmptyDemoSet(CgdaError):
    """No demonstrations supplied."""


class DimensionMismatch(CgdaError):
    """Feature or joint dimensions disagree."""


class SingularSystem(CgdaError):
    """Interpolation system is numerically singular."""


class OutOfRange(CgdaError):
    """Query parameter outside its admissible interval."""


class EmptySequence(CgdaError):
    """Scalar sequence for alignment is empty."""


class JointLimitViolation(CgdaError):
    """Joint vector outside the configured joint limits."""


class NoWallConfigured(CgdaError):
    """Coverage features requested from an environment without a wall."""


class PopulationTooSmall(CgdaError):
    """Population cannot support the requested selection scheme."""


class EmptyPointSet(CgdaError):
    """Bounding box requested for an empty point set."""


class ConfigError(CgdaError):
    """Experiment configuration is invalid."""
