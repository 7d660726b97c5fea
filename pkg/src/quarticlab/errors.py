"""Exception taxonomy shared by all modules.

Every error condition named in a module contract gets its own class so
callers can catch precisely; all inherit QuarticLabError.
"""


class QuarticLabError(Exception):
    pass


# exactalg
class InexactDivision(QuarticLabError):
    """Exact polynomial division requested but remainder is nonzero.

    Carries the remainder's leading term as (exponents, coefficient).
    """

    def __init__(self, msg, leading_term=None):
        super().__init__(msg)
        self.leading_term = leading_term


class ZeroPolynomial(QuarticLabError):
    pass


class DegreeTooLow(QuarticLabError):
    pass


class NotSquarefree(QuarticLabError):
    pass


class PrecisionExhausted(QuarticLabError):
    pass


# quartic
class NotIrreducible(QuarticLabError):
    pass


class WrongGaloisClass(QuarticLabError):
    pass


class ImpossibleForIrreducible(QuarticLabError):
    pass


# cofactors
class InternalIdentityViolation(QuarticLabError):
    """An identity that must hold for every quartic failed; arithmetic bug."""


class BezoutFailure(QuarticLabError):
    pass


class NotCoprime(QuarticLabError):
    pass


class IdentityViolation(QuarticLabError):
    pass


# normform
class SplitFailure(QuarticLabError):
    pass


class OrderingInconsistent(QuarticLabError):
    pass


class ReconstructionFailure(QuarticLabError):
    pass


class NormFormViolation(QuarticLabError):
    pass


# localcount
class BadPrime(QuarticLabError):
    pass


class HypothesisViolation(QuarticLabError):
    pass


class TheoryViolation(QuarticLabError):
    pass


class BadModulus(QuarticLabError):
    pass


class TooLarge(QuarticLabError):
    pass


# lattice
class SingularBasis(QuarticLabError):
    pass


class DegenerateDirection(QuarticLabError):
    pass


class Collinear(QuarticLabError):
    pass


class EmptyLattice(QuarticLabError):
    pass


# experiments / sieveconfig
class Undecided(QuarticLabError):
    """Three-valued outcome: the budget ran out before a decision was exact.

    Never a wrong boolean; carries whatever partial data was computed.
    """

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial
