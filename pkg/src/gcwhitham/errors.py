"""Exception hierarchy.

Every error carries a stable ``code`` used by the CLI to pick an exit status:
2 for validation failures, 3 for numerical failures, 4 for bad arguments.
"""


class WhithamError(Exception):
    exit_code = 3


class ValidationError(WhithamError):
    exit_code = 2


class NumericalError(WhithamError):
    exit_code = 3


class ArgumentError(WhithamError):
    exit_code = 4


# symbols
class StripViolation(ArgumentError):
    """Point lies outside the analyticity strip |Im z| < eta_star."""


class BranchAmbiguity(NumericalError):
    """Radicand of the square root touched the negative real axis."""


class OrderTooHigh(ArgumentError):
    pass


class DomainError(ArgumentError):
    pass


# dispersion
class NoRoot(ArgumentError):
    pass


class ContourThroughZero(NumericalError):
    pass


class NonIntegerWinding(NumericalError):
    pass


# kernel
class AccuracyLoss(NumericalError):
    pass


# trigcalc
class PowerOverflow(ArgumentError):
    pass


class NotSolvable(NumericalError):
    pass


class RankDeficient(NumericalError):
    pass


# normalform
class RouteMismatch(ValidationError):
    pass


# waves
class PersistenceViolation(ValidationError):
    pass


class CeilingViolation(ValidationError):
    pass


# spectral
class AliasingError(NumericalError):
    pass


class SingularJacobian(NumericalError):
    def __init__(self, message, smallest_singular_value=None):
        super().__init__(message)
        self.smallest_singular_value = smallest_singular_value


class NoConvergence(NumericalError):
    def __init__(self, message, best=None, history=None):
        super().__init__(message)
        self.best = best
        self.history = history or []
