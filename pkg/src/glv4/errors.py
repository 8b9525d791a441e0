"""Exception types shared across the library."""


class Glv4Error(Exception):
    """Base class for all library errors."""


class DivisionByZero(Glv4Error, ZeroDivisionError):
    pass


class ContextMismatch(Glv4Error):
    """Operands belong to different field contexts."""


class ResidueConditionFailed(Glv4Error):
    """The prime does not satisfy a curve family's residue condition."""


class PoleAtInput(Glv4Error):
    """A rational map denominator vanished at the input point."""


class NoRoot(Glv4Error):
    """A quadratic has no root modulo n."""


class NeitherRootMatches(Glv4Error):
    """No root of the characteristic polynomial matches the endomorphism."""


class NoLargePrimeSubgroup(Glv4Error):
    """The twist order has no prime factor with cofactor <= 4."""


class AmbiguousOrder(Glv4Error):
    """More than one trace candidate annihilates all sampled points."""


class UnsupportedFamily(Glv4Error):
    """Operation not available for this curve family."""


class RankDeficient(Glv4Error):
    """Lattice basis is not full rank."""


class SingularBasis(Glv4Error):
    """The rational solve in Babai rounding failed."""


class DimensionMismatch(Glv4Error):
    """Scalar and point lists have different lengths."""


class PreconditionFailed(Glv4Error):
    """An arithmetic precondition did not hold."""


class MissingComparisonCurve(Glv4Error):
    """The base-field comparison instance was not supplied."""
