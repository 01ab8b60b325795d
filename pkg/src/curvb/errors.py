"""Exception types shared across the toolkit."""


class CurvbError(Exception):
    """Base class for all toolkit errors."""


class DependentInput(CurvbError):
    """Vectors handed to orthonormalization are linearly dependent."""


class BadDimension(CurvbError):
    """A dimension argument is out of range for the requested object."""


class EvaluationFailure(CurvbError):
    """A user-supplied field could not be evaluated at a point."""


class UnsupportedDimension(CurvbError):
    """Model kind and ambient dimension are incompatible."""


class DimensionMismatch(CurvbError):
    """Vector arguments do not match the model dimension."""


class UnsupportedKind(CurvbError):
    """Model kind tag is not one of the eight supported geometries."""


class DegeneratePlane(CurvbError):
    """The two vectors do not span a 2-plane to working tolerance."""


class RankDeficient(CurvbError):
    """Immersion differential drops rank at the evaluation point."""


class SingularMetric(CurvbError):
    """A metric matrix is numerically singular where invertibility is required."""


class NotAWarpedProductMetric(CurvbError):
    """Induced metric fails the block test against g_B + f^2 g_F."""


class SpecFileError(CurvbError):
    """A declarative immersion file is malformed."""
