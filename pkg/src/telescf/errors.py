"""Exception hierarchy shared by all modules."""


class TelescfError(Exception):
    """Base class for every error raised by this package."""


class DomainError(TelescfError, ValueError):
    """An argument lies outside the domain of the operation (e.g. a zero denominator)."""


class PreconditionError(TelescfError, ValueError):
    pass


class InternalInvariantError(TelescfError, AssertionError):
    """A structural identity that must hold by construction was violated."""


class AlgorithmTerminated(TelescfError):
    """The coefficient algorithm cannot continue past step ``last_m``.

    Coefficients already produced remain valid and are attached as
    ``coefficients`` (possibly empty) together with the step reports.
    """

    def __init__(self, message, last_m, coefficients=(), reports=()):
        super().__init__(message)
        self.last_m = last_m
        self.coefficients = list(coefficients)
        self.reports = list(reports)


class ResourceError(TelescfError):
    """An iteration cap was hit; ``best`` holds the tightest certified result reached."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class QDBreakdown(TelescfError, ZeroDivisionError):
    """A zero divisor appeared in the quotient-difference rhombus scheme."""

    def __init__(self, message, cell):
        super().__init__(message)
        self.cell = cell
