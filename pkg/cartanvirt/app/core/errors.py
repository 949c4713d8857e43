"""Exception hierarchy shared by every service.

All domain errors derive from ``CartanVirtError`` (itself a ``ValueError``) so
callers can catch one type at the command boundary.
"""


class CartanVirtError(ValueError):
    """Base class for every domain error."""


# Linear algebra
class NotSquare(CartanVirtError):
    pass


class NotSymmetric(CartanVirtError):
    pass


class Degenerate(CartanVirtError):
    pass


class DimensionMismatch(CartanVirtError):
    pass


class TangentNotPositiveDefinite(CartanVirtError):
    pass


# Lie algebras and groups
class NotInvertible(CartanVirtError):
    pass


class ClosureViolation(CartanVirtError):
    """A matrix that should lie in the algebra does not (e.g. g fails to normalize it)."""


# Symmetric spaces
class BadParams(CartanVirtError):
    pass


class WrongLambdaSign(CartanVirtError):
    """lambda must be negative on compact factors and positive on non-compact ones."""


class NotInM(CartanVirtError):
    pass


# Immersions
class NotNormal(CartanVirtError):
    pass


class SingularMetric(CartanVirtError):
    pass


class NotFull(CartanVirtError):
    pass


class KernelMismatch(CartanVirtError):
    """The two hat maps have different kernels: the immersions are not equivalent."""


# Inputs
class SpaceSpecError(CartanVirtError):
    pass
