"""Exception hierarchy. Every error raised by the package derives from KacFusionError."""


class KacFusionError(Exception):
    pass


class UnknownType(KacFusionError, ValueError):
    """(family, n, r) does not name an affine diagram."""


class InvalidLattice(KacFusionError, ValueError):
    pass


class NotRegular(KacFusionError, ValueError):
    """Weight has a nontrivial stabilizer under the relevant affine Weyl group."""


class OutOfRange(KacFusionError, ValueError):
    pass


class LevelNonPositive(KacFusionError, ValueError):
    pass


class NonIntegralWeight(KacFusionError, ValueError):
    pass


class NotDominant(KacFusionError, ValueError):
    pass


class NotIntegral(KacFusionError, ValueError):
    pass


class SingularPoint(KacFusionError, ArithmeticError):
    """Weyl denominator vanishes (or nearly so) at the evaluation point."""


class WeightNotInBasis(KacFusionError, KeyError):
    pass


class NearHalfInteger(KacFusionError, ArithmeticError):
    """Numeric Verlinde output too far from an integer to round safely."""


class UntwistedType(KacFusionError, ValueError):
    pass


class TwistedType(KacFusionError, ValueError):
    pass


class SingleRootLength(KacFusionError, ValueError):
    pass
