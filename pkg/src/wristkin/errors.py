"""Exception types shared across the package.

The CLI maps these onto exit codes: file/measurement problems
(SchemaError, OrientationError, OutOfReachError) are data errors,
PoleError and DegenerateDataError are numeric errors. Plain ValueError
is reserved for programmer-level argument mistakes.
"""


class WristKinError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(WristKinError):
    """A session/surface/report file does not match its documented schema."""


class OrientationError(WristKinError):
    """Rotation columns are not a proper rotation within tolerance."""


class OutOfReachError(WristKinError):
    """Tracked position lies outside the kinematic chain's reachable set."""


class PoleError(WristKinError):
    """Rational surface evaluated too close to a denominator zero."""


class DegenerateDataError(WristKinError):
    """Statistic undefined for this data (zero variance, empty split, ...)."""
