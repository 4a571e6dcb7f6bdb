"""Exception types shared across the library.

Contract violations raise; mathematical verdicts (bounded or not, chaotic or
not) never raise and are reported through result objects instead.
"""


class ShiftLabError(Exception):
    """Base class for all library errors."""


class IndexNegative(ShiftLabError):
    """A sequence was evaluated at a negative index."""


class IndexCapExceeded(ShiftLabError):
    """A sequence index beyond the supported cap (10**6) was requested."""


class ZeroDenominator(ShiftLabError):
    """The rational part of a sequence expression vanishes at a needed index."""


class ZeroWeight(ShiftLabError):
    """A weight w_n is zero; weighted products and shifts require w_n != 0."""


class DegenerateSpace(ShiftLabError):
    """The coefficient growth of (a, b) does not define a disc of positive radius."""


class NotCertifiable(ShiftLabError):
    """A tail or bound that the caller required to be certified could not be."""


class NotInDual(ShiftLabError):
    """The requested evaluation functional is not (certifiably) in the dual space."""


class NotRootOfUnity(ShiftLabError):
    """Periodic-orbit residuals need |lambda| = 1 with lambda^m = 1 for the given m."""


class PolynomialNotInSpace(ShiftLabError):
    """A monomial has no norm-convergent expansion in the basis."""


class PreconditionNotMet(ShiftLabError):
    """An operation's stated precondition fails (wrong exponent mode, etc.)."""


class ErrorBudgetExceeded(ShiftLabError):
    """An orbit's accumulated truncation-error budget exceeded the tolerance."""


class CertMismatch(ShiftLabError):
    """A production value disagrees with the high-precision oracle beyond its bound."""

class TailNotCertifiable(NotCertifiable):
    """A series/column tail could not be certified; heuristic data may follow."""
