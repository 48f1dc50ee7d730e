"""Exception types shared across the package.

Every error raised on a documented contract violation has its own class
so callers (and the CLI) can dispatch on it; all inherit from LabError.
"""


class LabError(Exception):
    """Base class for all package errors."""


class NotPrime(LabError):
    """The characteristic is composite or equals 2."""


class DegreeOutOfRange(LabError):
    """Extension or polynomial degree outside the allowed range."""


class NotMonic(LabError):
    """Polynomial whose leading coefficient is not 1."""


class ZeroDegree(LabError):
    """Constant polynomial where degree >= 1 is required."""


class NotIrreducible(LabError):
    """Supplied modulus fails the irreducibility test."""


class ZeroToZero(LabError):
    """0^0 requested."""


class CtxMismatch(LabError):
    """Element used with a field it does not belong to."""


class TooLarge(LabError):
    """Ring size exceeds the enumeration cap."""


class DegreeTooLarge(LabError):
    """Explicit map degree exceeds the dense-polynomial cap."""


class InvalidDegreeSpec(LabError):
    """Degree family incompatible with the ring (e.g. (p-1)^l with p < 5)."""


class NotARoot(LabError):
    """Claimed residue does not solve the congruence."""


class SingularRoot(LabError):
    """Derivative vanishes mod p; Newton lifting does not apply."""


class PrecisionTooLarge(LabError):
    """p^k exceeds the machine-word comfort cap and wide mode is off."""


class SieveCapExceeded(LabError):
    """Sieve bound above the configured cap."""


class DomainTooSmall(LabError):
    """Argument below the smallest value where the formula is defined."""


class EmptyDenominator(LabError):
    """No admissible (c, p) pairs below the requested bound."""


class EmptyInput(LabError):
    """An aggregate was asked for on an empty collection."""
