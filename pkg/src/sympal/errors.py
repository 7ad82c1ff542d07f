"""Exception hierarchy.

Every domain error derives from :class:`SympalError`; the CLI maps those to
exit code 2.
"""


class SympalError(Exception):
    """Base class for domain errors."""


class NotPrime(SympalError):
    pass


class NotIrreducible(SympalError):
    """Raised for reducible moduli and for representations that are not
    absolutely irreducible."""


class NotDivisor(SympalError):
    pass


class NotGSp(SympalError):
    pass


class Singular(SympalError):
    pass


class ZeroDirection(SympalError):
    pass


class ZeroParameter(SympalError):
    pass


class Degenerate(SympalError):
    pass


class NotAlternating(SympalError):
    pass


class ZeroMatrix(SympalError):
    pass


class CapExceeded(SympalError):
    def __init__(self, cap):
        super().__init__(f"enumeration exceeded cap of {cap} elements")
        self.cap = cap


class MixedAmbient(SympalError):
    pass


class CharTwo(SympalError):
    pass


class TracesNotInSubfield(SympalError):
    pass


class DescentFailed(SympalError):
    pass


class NotIrreducibleOnI(SympalError):
    pass


class NormObstruction(SympalError):
    pass


class MissingFactorization(SympalError):
    pass


class HypothesisFails(SympalError):
    pass


class NotTriangularizable(SympalError):
    pass


class DividesP(SympalError):
    pass


class Ramified(SympalError):
    pass


class BadPrime(SympalError):
    pass


class NotSurjective(SympalError):
    pass


class NoMultiplier(SympalError):
    pass


class TableLimit(SympalError):
    """The field is too large for the dense lookup tables used by group code."""
