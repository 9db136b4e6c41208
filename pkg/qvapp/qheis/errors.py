"""
Exception hierarchy for the qheis app.

Every error also derives from the closest builtin so callers that only know
the standard exceptions keep working.
"""


class QHeisError(Exception):
    """
    Base class for all qheis errors.
    """


class PayloadError(QHeisError, TypeError):
    """
    Series or operator payloads come from incompatible coefficient rings.
    """


class NonUnitError(QHeisError, ZeroDivisionError):
    """
    Inversion requested for a series whose constant term is not a unit.
    """


class RegionRequiredError(QHeisError, ValueError):
    """
    A negative power was expanded without an explicit region.
    """


class TruncationError(QHeisError, ValueError):
    """
    A coefficient was requested outside the retained degree caps.
    """


class IndexRangeError(QHeisError, IndexError):
    pass


class MatchingError(QHeisError, ValueError):
    pass


class InconsistentSystemError(QHeisError, ArithmeticError):
    """
    The order-by-order trace solve met a right-hand side that is not a scalar multiple of
    the identity.
    """


class KernelError(QHeisError, ArithmeticError):
    """
    The contraction kernel has a shape the Wick rule cannot use.
    """


class NotDiagonalError(QHeisError, ValueError):
    pass


class CharacterError(QHeisError, ValueError):
    pass


class ParseError(QHeisError, ValueError):
    pass


class ConfigError(QHeisError, ValueError):
    pass


class CacheError(QHeisError, OSError):
    pass
