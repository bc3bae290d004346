"""Exception hierarchy.

Every domain failure derives from :class:`AllPassError`, itself a
``ValueError``, so callers that only care about "bad input" can catch the
builtin.
"""


class AllPassError(ValueError):
    """Base class for all domain errors raised by this package."""


# polymat
class SingularC(AllPassError):
    pass


class SingularLeadingTerm(AllPassError):
    """Theta_0 fails the non-singularity threshold."""


class InterpolationIllConditioned(AllPassError):
    pass


class NotDivisible(AllPassError):
    pass


# roots
class DegenerateDeterminant(AllPassError):
    pass


class UnitCircleRoot(AllPassError):
    pass


class UnpairedComplexRoot(AllPassError):
    pass


class MultipleRoot(AllPassError):
    pass


# blaschke
class PoleHit(AllPassError):
    pass


class NotComplexPair(AllPassError):
    pass


class Unstable(AllPassError):
    pass


class DegenerateW(AllPassError):
    pass


# mirror
class NotARoot(AllPassError):
    pass


class RankDeficiencyMismatch(AllPassError):
    pass


class ResidualImagTooLarge(AllPassError):
    pass


class DegenerateSingularValues(AllPassError):
    pass


class KernelDegenerate(AllPassError):
    pass


class DeflationResidual(AllPassError):
    pass


class SpanUnsolvable(AllPassError):
    pass


class RootRelocationAmbiguous(AllPassError):
    pass


# regimes
class RegimeExplosion(AllPassError):
    pass
