"""Exception types shared across the package."""


class ICFeedbackError(Exception):
    """Base class for all package errors."""


class UnsupportedOrder(ICFeedbackError):
    """No Hadamard construction is available for the requested order."""


class DimensionMismatch(ICFeedbackError):
    """Vector or matrix dimensions do not match the user count."""


class DomainError(ICFeedbackError):
    """Argument outside the mathematical domain of the operation."""


class ZeroContraction(ICFeedbackError):
    """A step contraction factor of zero cannot be inverted."""


class RateInfeasible(ICFeedbackError):
    """Requested rate is not below the decoding threshold of the schedule."""


class InfeasibleTransient(ICFeedbackError):
    """No positive transient schedule reaches the requested steady state."""


class SingularSystem(ICFeedbackError):
    """The steady-state eigenvalue system is singular."""


class RootNotBracketed(ICFeedbackError):
    """A scalar fixed-point equation has no sign change on its bracket."""


class DegenerateGain(ICFeedbackError):
    """Cross gain value routes the problem to a different solver."""


class NoAdmissibleRoot(ICFeedbackError):
    """The quartic has no root satisfying the admissibility constraints."""


class UndefinedAtOne(ICFeedbackError):
    """Generalized degrees of freedom are not defined at alpha = 1."""


class DegenerateDenominator(ICFeedbackError):
    """Closed-form minimizer denominator vanishes."""


class UnknownFigure(ICFeedbackError):
    """Figure id is not one of the recognized jobs."""
