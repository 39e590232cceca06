"""Exception hierarchy shared by every helixlab module."""


class HelixLabError(Exception):
    """Base class for all library errors."""


class DimensionError(HelixLabError, ValueError):
    pass


class OrderError(HelixLabError, ValueError):
    pass


class UnsupportedOrder(OrderError):
    pass


class DomainError(HelixLabError, ValueError):
    pass


class EmptyInput(HelixLabError, ValueError):
    pass


class NullCurveError(HelixLabError):
    """The curve (or its tangent) is null somewhere it must not be."""


class DegenerateFrameError(HelixLabError):
    """Gram-Schmidt produced a null or vanishing frame vector."""


class NotProperOrderError(HelixLabError):
    """Some curvature vanished, so the curve is not proper of full order."""


class FrameContinuityError(HelixLabError):
    pass


class MissingHessian(HelixLabError):
    pass


class SpecParseError(HelixLabError, ValueError):
    """A curve, field or metric description could not be understood."""
