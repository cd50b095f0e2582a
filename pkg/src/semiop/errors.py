"""Exception types raised across the package."""


class SemiOpError(Exception):
    """Base class for all errors raised by semiop."""


class NotHermitian(SemiOpError, ValueError):
    pass


class NotPSD(SemiOpError, ValueError):
    pass


class NoConvergence(SemiOpError, RuntimeError):
    pass


class DimensionMismatch(SemiOpError, ValueError):
    pass


class NotAdmissible(SemiOpError, ValueError):
    """The operator has no A-adjoint, i.e. R(T*A) is not inside R(A)."""


class EmptyList(SemiOpError, ValueError):
    pass


class CenterConflict(SemiOpError, ValueError):
    """Odd cross-diagonal matrix whose middle diagonal and anti-diagonal blocks differ."""


class DegreeTooSmall(SemiOpError, ValueError):
    pass


class NegativeNorm(SemiOpError, ValueError):
    pass


class BadRank(SemiOpError, ValueError):
    pass


class UnknownCheck(SemiOpError, KeyError):
    pass


class HypothesisViolation(SemiOpError, ValueError):
    """A generated instance does not satisfy the hypotheses of the check."""
