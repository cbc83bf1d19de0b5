"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`CdmmError`,
and additionally from the closest builtin so callers can catch either.
"""


class CdmmError(Exception):
    pass


# ring construction / arithmetic

class NotPrime(CdmmError, ValueError):
    pass


class WordOverflow(CdmmError, ValueError):
    pass


class ParamsMismatch(CdmmError, ValueError):
    pass


class NonUnit(CdmmError, ArithmeticError):
    pass


class CountTooLarge(CdmmError, ValueError):
    pass


# polynomials

class NonExceptionalPoints(CdmmError, ArithmeticError):
    """Some pairwise difference of the points is not a unit, so no interpolation."""


class LengthMismatch(CdmmError, ValueError):
    pass


# rmfe

class WidthTooLarge(CdmmError, ValueError):
    pass


class DegreeTooSmall(CdmmError, ValueError):
    pass


class TowerMismatch(CdmmError, ValueError):
    pass


class ShapeMismatch(CdmmError, ValueError):
    pass


# coding layer

class IndivisibleDimensions(CdmmError, ValueError):
    pass


class ThresholdExceedsWorkers(CdmmError, ValueError):
    pass


class InsufficientResponses(CdmmError, RuntimeError):
    """Fewer than R distinct workers answered: too many stragglers."""


class DuplicateWorker(CdmmError, ValueError):
    pass


class PresetConflict(CdmmError, ValueError):
    pass


class BatchLengthMismatch(CdmmError, ValueError):
    pass


class NonBaseResult(CdmmError, ArithmeticError):
    pass


class SchemeMismatch(CdmmError, ValueError):
    pass


class VerificationFailed(CdmmError, RuntimeError):
    pass
