"""Exception types shared by every module."""


class KPZError(Exception):
    """Base class for library errors."""


class DomainError(KPZError, ValueError):
    """Input outside the domain where the quantity is defined."""


class AccuracyError(KPZError, ArithmeticError):
    """A numerical self-consistency check failed.

    ``coarse`` and ``fine`` hold the two estimates that disagreed.
    """

    def __init__(self, message, coarse=None, fine=None):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine


class StatisticalQualityError(KPZError):
    """A Monte Carlo estimate is too degenerate to support a conclusion."""

    def __init__(self, message, ess=None):
        super().__init__(message)
        self.ess = ess
