"""Exception types raised by :mod:`abwire`."""


class AbwireError(Exception):
    """Base class for all library errors."""


class DomainError(AbwireError, ValueError):
    """Argument outside the domain where a quantity is defined."""


class AccuracyError(AbwireError, ArithmeticError):
    """A numerical estimate could not be brought below its tolerance."""


class ConvergenceError(AbwireError, ArithmeticError):
    """A series or extrapolation did not converge within its budget."""
