"""Exception types shared across the package."""


class EllipError(Exception):
    """Base class for all package errors."""


class FormError(EllipError, ValueError):
    """A Gram matrix violates one of the hypotheses on the quadratic form."""


class NotSymmetric(FormError):
    pass


class NotPositiveDefinite(FormError):
    pass


class OddDiagonal(FormError):
    pass


class NotIntegral(FormError):
    pass


class NumericalBreakdown(EllipError, ArithmeticError):
    pass


class ModulusTooLarge(EllipError, ValueError):
    pass


class Overflow(EllipError, OverflowError):
    pass


class LengthMismatch(EllipError, ValueError):
    pass


class NonInvertible(EllipError, ZeroDivisionError):
    pass


class NotSquarefreeOddPart(EllipError, ValueError):
    pass


class SingularFactor(EllipError, ZeroDivisionError):
    pass


class MismatchDetected(EllipError, AssertionError):
    """Two independent computations of the same quantity disagree."""


class DegenerateGegenbauer(EllipError, ZeroDivisionError):
    pass


class GridTooCoarse(EllipError, ValueError):
    pass


class EmptyPointSet(EllipError, ValueError):
    pass


class DegenerateData(EllipError, ValueError):
    pass


class QuadratureNonConvergence(EllipError, RuntimeError):
    pass
