"""Exception hierarchy.

Every error raised on purpose derives from :class:`CCATrapError`, and also from
the builtin class closest in meaning so plain ``except ValueError`` still works.
"""


class CCATrapError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CCATrapError, ValueError):
    """Argument outside the domain of a function (e.g. ``|k| > pi``)."""


class PoleError(CCATrapError, ZeroDivisionError):
    """Evaluation exactly at a pole."""

    def __init__(self, message, pole=None):
        super().__init__(message)
        self.pole = pole


class BranchPointError(CCATrapError, ValueError):
    """Evaluation at a band edge ``z = +-2J``."""


class DegenerateError(CCATrapError, ValueError):
    """Quantity undefined in the uncoupled limit or at a band edge."""


class UnsupportedRangeError(CCATrapError, ValueError):
    """Arguments outside the supported numerical envelope."""


class QuadratureError(CCATrapError, RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance.

    ``estimate`` and ``error`` hold the best value and its error bound at the
    point the panel budget ran out.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ConvergenceError(CCATrapError, RuntimeError):
    """A series or iterative solver did not converge."""


class WrapError(CCATrapError, ValueError):
    """Finite-ring propagation requested past the wrap-around time."""


class InsufficientWindowError(CCATrapError, ValueError):
    """Signal too short for a periodic average."""
