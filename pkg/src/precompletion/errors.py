"""Exception hierarchy shared by every module."""


class AlgebraError(Exception):
    """Base class for all errors raised by the package."""


class AmbientMismatch(AlgebraError, ValueError):
    pass


class PrecisionMismatch(AlgebraError, ValueError):
    pass


class NotAUnit(AlgebraError, ArithmeticError):
    pass


class ParseError(AlgebraError, ValueError):
    pass


class ZeroElement(AlgebraError, ValueError):
    pass


class ZeroIdeal(AlgebraError, ValueError):
    pass


class UnitIdeal(AlgebraError, ValueError):
    pass


class NonHomogeneous(AlgebraError, ValueError):
    pass


class TooManyVariables(AlgebraError, ValueError):
    pass


class PreconditionViolated(AlgebraError, ValueError):
    pass


class BoundExhausted(AlgebraError, IndexError):
    pass


class MissingWitness(AlgebraError, LookupError):
    pass


class WitnessVerificationFailed(AlgebraError, RuntimeError):
    """Raised when a certificate produced by the construction does not check.

    This always indicates a bug in this package.
    """


class PrecisionTooLow(AlgebraError, ValueError):
    pass


class SpecError(AlgebraError, ValueError):
    """Malformed ring file or CLI input."""
