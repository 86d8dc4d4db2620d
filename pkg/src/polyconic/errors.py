"""Exception types shared across the package."""


class PolyconicError(Exception):
    """Base class for all package-specific errors."""


class SingularPointError(PolyconicError):
    """Query point coincides with a focus; derivatives are one-sided there."""


class ZeroGradientError(PolyconicError):
    """Gradient vanishes (the point is a minimizer); curvature is undefined."""


class LevelBelowMinimumError(PolyconicError):
    """Requested level lies below the minimum of the distance sum."""


class LevelAtMinimumError(PolyconicError):
    """Level equals the minimum: the level set degenerates to a point or segment."""


class CollinearPointsError(PolyconicError):
    """Three points are collinear; no circumscribed circle exists."""


class NotAFocusError(PolyconicError):
    """The given point does not match any focus of the focal set."""


class NotSymmetricError(PolyconicError):
    """A focal set fails the required dihedral invariance check."""


class RingViolationError(PolyconicError):
    """Traced curve leaves the annulus required for the similarity rescale."""


class QuadratureFailureError(PolyconicError):
    """Adaptive quadrature could not reach the requested tolerance."""


class SceneError(PolyconicError):
    """Scene file failed validation."""
