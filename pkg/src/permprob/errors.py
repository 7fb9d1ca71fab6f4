"""Exception hierarchy.

Three families, which the command line maps to distinct exit codes:
input problems (:class:`InputError`), numeric/domain problems
(:class:`DomainError`) and size guards (:class:`DimensionTooLarge`).
"""


class PermanentError(Exception):
    """Base class for every error raised by this package."""


class InputError(PermanentError):
    pass


class ParseError(InputError):
    pass


class ShapeError(InputError):
    pass


class NonFiniteEntry(InputError, ValueError):
    pass


class DomainError(PermanentError):
    pass


class DimensionMismatch(DomainError, ValueError):
    pass


class NonInvertible(DomainError, ZeroDivisionError):
    pass


class NotSymmetric(DomainError):
    pass


class NotPositiveDefinite(DomainError):
    pass


class OverflowToInfinity(DomainError, OverflowError):
    pass


class DimensionTooLarge(PermanentError):
    def __init__(self, what, n, limit):
        super().__init__(f"{what}: n={n} exceeds the size guard n <= {limit}")
        self.n = n
        self.limit = limit


def check_size(what, n, limit):
    if n > limit:
        raise DimensionTooLarge(what, n, limit)
