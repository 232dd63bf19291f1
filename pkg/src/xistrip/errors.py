"""Exception hierarchy shared by the numerical modules."""


class XiStripError(Exception):
    """Base class for every error raised by this package."""


class DomainError(XiStripError, ValueError):
    """An argument lies outside the domain of the requested function."""


class SingularityError(XiStripError, ZeroDivisionError):
    """A closed form was evaluated at a point where its denominator vanishes."""


class QuadratureError(XiStripError, RuntimeError):
    pass


class SubdivisionLimitError(QuadratureError):
    pass


class NonFiniteIntegrandError(QuadratureError):
    pass


class EnvelopeViolationError(QuadratureError):
    """A registered decay envelope failed to dominate the integrand."""


class BracketingError(XiStripError, RuntimeError):
    pass


class OracleAccuracyError(XiStripError, RuntimeError):
    """The completed-zeta oracle's internal consistency checks disagree."""
