"""Exception hierarchy.

Class names are the error identifiers surfaced by the command line tool, so
they are kept short and descriptive rather than suffixed with ``Error``.
"""


class PPError(Exception):
    """Base class for every error raised by this package."""


# fields
class NotPrime(PPError, ValueError):
    pass


class ReducibleModulus(PPError, ValueError):
    pass


class DegreeMismatch(PPError, ValueError):
    pass


class FieldTooLarge(PPError, ValueError):
    pass


class DivisionByZero(PPError, ZeroDivisionError):
    pass


class NotADivisor(PPError, ValueError):
    pass


# linearized
class NotFullRank(PPError, ValueError):
    pass


# construct
class RankCollapse(PPError, ValueError):
    pass


class IndexOutOfRange(PPError, ValueError):
    pass


class NotCoprime(PPError, ValueError):
    pass


class SameKernel(PPError, ValueError):
    pass


class ImageClash(PPError, ValueError):
    pass


class EvenCharacteristic(PPError, ValueError):
    pass


class FieldTooSmall(PPError, ValueError):
    pass


class NotAPermutationWitness(PPError, ValueError):
    pass


class CoefficientNotInSubfield(PPError, ValueError):
    pass


class LambdaNotInImage(PPError, ValueError):
    pass


class BaseNotPermutation(PPError, ValueError):
    pass


class IneligibleLine(PPError, ValueError):
    pass


# inverse
class WrongFamily(PPError, ValueError):
    pass


class NoSuchDeltaJ(PPError, RuntimeError):
    """A kernel-matching root of unity was not found; indicates a bug upstream."""


class LambdaPowerNotInKernel(PPError, RuntimeError):
    pass


class NotAPermutation(PPError, ValueError):
    pass


# verify
class FieldTooLargeForListing(PPError, ValueError):
    pass
