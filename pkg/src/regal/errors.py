"""Exception types raised across the package."""


class RegalError(Exception):
    """Base class for all errors raised by regal."""


class DimensionMismatch(RegalError, ValueError):
    pass


class NotPrime(RegalError, ValueError):
    pass


class PositionOutOfRange(RegalError, ValueError):
    pass


class DegreeMismatch(RegalError, ValueError):
    pass


class ResourceLimit(RegalError):
    """A degree component exceeds the configured size cap."""


class NotOneDimensionalTop(RegalError):
    """The candidate top space (R x E) & (E x R) is not one-dimensional."""

    def __init__(self, dim, m):
        super().__init__(f"top space in degree {m} has dimension {dim}, expected 1")
        self.dim = dim
        self.m = m


class NoExactQ(RegalError):
    pass


class SingularSliceSpace(RegalError):
    pass


class SingularKappa(RegalError):
    pass


class NonGeneric(RegalError):
    pass


class NotDiagonalQ(RegalError):
    pass


class UnknownKey(RegalError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class InvalidParam(RegalError, ValueError):
    pass


class InsufficientData(RegalError, ValueError):
    pass


class FormatError(RegalError, ValueError):
    """Malformed algebra file; ``path`` locates the offending field."""

    def __init__(self, path, message):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
