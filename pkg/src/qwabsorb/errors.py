"""Exception hierarchy shared by all qwabsorb modules."""


class QWAbsorbError(Exception):
    """Base class for numerical failures raised by the library."""


class NonConvergenceError(QWAbsorbError):
    """The survival probability did not fall below the threshold in time."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class SingularDenominatorError(QWAbsorbError):
    """A rational integrand was evaluated at (or extremely near) a pole."""

    def __init__(self, message, z=None):
        super().__init__(message)
        self.z = z


class ToleranceNotMetError(QWAbsorbError):
    """Quadrature residual checks exceeded the requested tolerance."""

    def __init__(self, message, residual_sum=None, residual_im_c3=None):
        super().__init__(message)
        self.residual_sum = residual_sum
        self.residual_im_c3 = residual_im_c3


class InsufficientPointsError(QWAbsorbError):
    """Too few usable data points for a least-squares fit."""
