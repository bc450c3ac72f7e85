"""Exception types shared across the package."""


class MonochromError(Exception):
    """Base class for all errors raised by this package."""


class ZeroCoefficient(MonochromError, ValueError):
    pass


class TooFewTerms(MonochromError, ValueError):
    pass


class CoefficientTooLarge(MonochromError, ValueError):
    pass


class CapExceeded(MonochromError):
    pass


class NoSolutions(MonochromError):
    pass


class CoprimalityViolation(MonochromError):
    """No coefficient is coprime to the group order, so the Fourier identity does not apply."""


class DegenerateEquation(MonochromError):
    """Every coefficient vanishes modulo the group order."""


class GroupTooLarge(MonochromError):
    pass


class InfeasibleParams(MonochromError, ValueError):
    pass


class MalformedBreakpoints(MonochromError, ValueError):
    pass


class BudgetExceeded(MonochromError):
    pass


class DomainMismatch(MonochromError, ValueError):
    pass


class ConstructionCheckFailed(MonochromError, AssertionError):
    """A post-construction sanity check did not hold."""
