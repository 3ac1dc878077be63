"""Exception hierarchy.

``ValidationError`` covers malformed or out-of-contract input (CLI exit 2).
``CertificationMismatch`` signals two routes that are proven to agree but did
not (CLI exit 3), which means a bug somewhere.
"""


class TamePosetsError(Exception):
    pass


class ValidationError(TamePosetsError, ValueError):
    pass


class CycleDetected(ValidationError):
    pass


class UnknownElement(ValidationError):
    pass


class NotHasse(ValidationError):
    pass


class NotMonotone(ValidationError):
    pass


class NotSemilattice(ValidationError):
    pass


class DistributivityRequiresSemilattice(NotSemilattice):
    pass


class NotHomomorphism(ValidationError):
    pass


class SearchBudgetExceeded(TamePosetsError):
    pass


class DimensionMismatch(ValidationError):
    pass


class ShapeMismatch(DimensionMismatch):
    pass


class NotPrime(ValidationError):
    pass


class ValueOutOfRange(ValidationError):
    pass


class SupportNoAncestor(ValidationError):
    pass


class NotRelated(ValidationError):
    pass


class NotASup(ValidationError):
    pass


class GridTooLarge(ValidationError):
    pass


class PreconditionFailed(ValidationError):
    pass


class NotFunctorial(ValidationError):
    pass


class NotNatural(ValidationError):
    pass


class NotExact(ValidationError):
    pass


class EmptyValue(ValidationError):
    pass


class KoszulValidityUnknown(TamePosetsError):
    pass


class CertificationMismatch(TamePosetsError, AssertionError):
    pass


class CoordinateHitMinusOne(CertificationMismatch):
    pass
