"""Exception hierarchy shared by every module of the package."""


class BetaFreqError(Exception):
    """Base class for all package errors."""


class InvalidSpec(BetaFreqError, ValueError):
    """A base specification does not describe a real number greater than one."""


class NoRootInBracket(BetaFreqError, ValueError):
    pass


class MultipleRoots(BetaFreqError, ValueError):
    pass


class MixedFields(BetaFreqError, TypeError):
    pass


class PrecisionExhausted(BetaFreqError, ArithmeticError):
    """Certified comparison could not be decided within the precision budget."""


class AmbiguousAtPrecision(PrecisionExhausted):
    pass


class DigitOutOfAlphabet(BetaFreqError, ValueError):
    pass


class EmptySequence(BetaFreqError, ValueError):
    pass


class UnsupportedBase(BetaFreqError, ValueError):
    pass


class InvalidIndex(InvalidSpec):
    pass


class FrequencyOutOfRange(BetaFreqError, ValueError):
    pass


class IdentityViolated(BetaFreqError, AssertionError):
    """An exact identity that must hold failed; indicates an arithmetic bug."""


class OutOfDomain(BetaFreqError, ValueError):
    pass


class BoundaryHit(BetaFreqError):
    """An orbit landed exactly on a cut point, where the mirror symmetry does not apply."""


class HorizonExhausted(BetaFreqError):
    """No branch point was found within the search horizon."""


class BudgetExceeded(BetaFreqError):
    pass


class InfeasibleOrbit(BetaFreqError, AssertionError):
    """A generated orbit left the expansion interval; never expected."""


class DegenerateEndpoint(UserWarning):
    """The point is an endpoint of the interval and has a unique constant expansion."""
