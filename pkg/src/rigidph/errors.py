"""Exception hierarchy.

Three families map onto CLI exit statuses: ``ValidationError`` (malformed
filtrations, exit 3), ``DomainError`` (well-formed input outside an
operation's domain, exit 4) and ``EnumerationCapExceeded`` (exit 5).
"""

from __future__ import annotations


class RigidityError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(RigidityError, ValueError):
    pass


class DomainError(RigidityError, ValueError):
    pass


class EnumerationCapExceeded(RigidityError):
    def __init__(self, cap: int):
        super().__init__(f"enumeration exceeded cap of {cap} orders; raise the cap or shrink the instance")
        self.cap = cap


class NoMatchingBar(RigidityError, RuntimeError):
    """Internal consistency failure while resolving a matched bar."""


# -- validation ---------------------------------------------------------------

class NotClosed(ValidationError):
    def __init__(self, simplex, facet):
        super().__init__(f"complex not closed: {facet} (face of {simplex}) is missing")
        self.simplex, self.facet = simplex, facet


class DuplicateSimplex(ValidationError):
    def __init__(self, simplex):
        super().__init__(f"simplex {simplex} listed more than once")
        self.simplex = simplex


class MissingValue(ValidationError):
    def __init__(self, simplex):
        super().__init__(f"no filtration value for {simplex}")
        self.simplex = simplex


class UnknownSimplex(ValidationError):
    def __init__(self, simplex):
        super().__init__(f"value given for {simplex}, which is not in the complex")
        self.simplex = simplex


class DuplicateValue(ValidationError):
    def __init__(self, sigma, tau, value):
        super().__init__(f"filtration not injective: {sigma} and {tau} share value {value}")
        self.sigma, self.tau, self.value = sigma, tau, value


class MonotonicityViolation(ValidationError):
    def __init__(self, face, coface):
        super().__init__(f"filtration not monotone: face {face} is not below {coface}")
        self.face, self.coface = face, coface


# -- domain -------------------------------------------------------------------

class SimplexNotInComplex(DomainError):
    def __init__(self, simplex):
        super().__init__(f"{simplex} is not a simplex of the complex")
        self.simplex = simplex


class SingleSimplex(DomainError):
    pass


class DimensionMismatch(DomainError):
    pass


class PreconditionGapTooLarge(DomainError):
    pass


class BlockNotSorted(DomainError):
    pass


class BlockSpanTooLarge(DomainError):
    pass


class NotAPermutation(DomainError):
    pass


class OrderNotLinearExtension(DomainError):
    pass


class OrderNotRealizable(DomainError):
    pass


class NotACycle(DomainError):
    pass


class ZeroChain(DomainError):
    pass


class DimensionOutOfRange(DomainError):
    pass


class InfiniteBarMismatch(DomainError):
    pass


class EpsilonOutOfDomain(DomainError):
    pass


class InfiniteTerminationScale(DomainError):
    pass


class InfiniteBar(DomainError):
    pass


class NoSuchBar(DomainError):
    pass


class PerturbationTooLarge(DomainError):
    pass


class HypothesesNotSatisfied(DomainError):
    pass
