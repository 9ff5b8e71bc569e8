"""Exception types shared across the package."""


class GeometryError(Exception):
    """Base class for all errors raised by this package."""


class PlaneValidationError(GeometryError):
    """A norm specification failed validation at build time."""


class ConvexityViolation(PlaneValidationError):
    """The requested unit circle is not strictly convex."""


class PositivityViolation(PlaneValidationError):
    """The radial profile is not strictly positive."""


class BadParameter(PlaneValidationError):
    """A parameter is outside its admissible range."""


class ZeroVector(GeometryError):
    """A nonzero vector was required."""


class NotUnit(GeometryError):
    """A unit vector was required."""


class NoConvergence(GeometryError):
    """An iterative solve failed to reach its tolerance."""


class OutOfDomain(GeometryError):
    """Parameter value outside the curve domain."""


class SingularPoint(GeometryError):
    """The curve is singular where regularity was required."""


class LimitsDisagree(GeometryError):
    """One-sided tangent limits at a singularity are not parallel."""


class ResidualViolation(GeometryError):
    """A curve/normal pair fails the orthogonality residual bound."""


class DegenerateFrame(GeometryError):
    """The (normal, tangent) frame degenerated; internal tables corrupt."""


class NotAFront(GeometryError):
    """Curvature components vanish simultaneously; the pair is not an immersion."""


class NotClosed(GeometryError):
    """A closed curve was required."""


class MethodsDisagree(GeometryError):
    """Independent computations of the same index disagree."""


class KappaVanishes(GeometryError):
    """The normal-rotation rate vanishes where it must not."""


class RhoDegenerate(GeometryError):
    """The unit-circle distortion is too close to zero for this operation."""


class NotAnIsometry(GeometryError):
    """A linear map flagged as an isometry fails the norm-preservation check."""


class PreconditionViolated(GeometryError):
    """An operation's precondition does not hold for the given inputs."""


class DegenerateLine(GeometryError):
    """A pedal line direction is undefined because the base point was hit."""


class ConfigError(GeometryError):
    """A run configuration is malformed or references unknown entities."""


class ParseError(GeometryError):
    """Expression syntax error, with byte offset and expected-token set."""

    def __init__(self, message, offset, expected=()):
        super().__init__(message)
        self.offset = offset
        self.expected = tuple(expected)


class ExpressionDomainError(GeometryError):
    """An expression hit a domain error (log/sqrt/division) at evaluation."""


class IoError(GeometryError):
    """Output emission was refused or failed."""
