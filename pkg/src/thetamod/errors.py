"""Exception hierarchy shared by every module of the package."""


class ThetaModError(Exception):
    """Base class for all errors raised by thetamod."""


class NonInvertibleDenominator(ThetaModError, ZeroDivisionError):
    """A rational with denominator divisible by p was reduced modulo p^m."""


class DomainMismatch(ThetaModError, TypeError):
    """Two series over different coefficient rings were combined."""


class InsufficientPrecision(ThetaModError, ValueError):
    """A computation needs more known coefficients than were supplied."""


class PrecisionTooLow(InsufficientPrecision):
    """The requested precision cannot pin down a basis of the weight."""


class DivisibilityViolation(ThetaModError, ValueError):
    """(p - 1) divides the weight where the construction forbids it."""


class NotModularOfThisWeight(ThetaModError, ValueError):
    """A q-expansion does not match any form of the requested weight."""


class NotNormalized(ThetaModError, ValueError):
    """The weight filtration was requested for a form that is 0 mod p."""


class NoSolution(ThetaModError, RuntimeError):
    """A congruence that is guaranteed to be solvable was not solved.

    This always signals a bug or a precision failure, never a genuine
    mathematical outcome.
    """


class HypothesisFailure(ThetaModError, ValueError):
    """The hypotheses of an optimal-weight check do not hold for the input."""
