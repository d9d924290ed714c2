"""Exception hierarchy.  The CLI maps these onto exit codes."""


class DDSError(Exception):
    """Base class for every error raised by the package."""


class DomainError(DDSError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class RangeError(DomainError):
    """An argument exceeds the supported numerical range."""

    def __init__(self, message: str, maximum=None):
        super().__init__(message)
        self.maximum = maximum


class UnsupportedParameterError(DomainError):
    pass


class PoleError(DDSError, ArithmeticError):
    """A kernel was evaluated at (or numerically on top of) a pole."""

    def __init__(self, message: str, index=None):
        super().__init__(message)
        self.index = index


class CommonDiscontinuityError(PoleError):
    """A pole of the integrand coincides with a jump of the floor integrator."""


class InternalConsistencyError(DDSError, ArithmeticError):
    """Two computation paths disagree beyond their stated tolerance."""


class FitError(DDSError, ValueError):
    pass


class DegenerateCurveError(FitError):
    pass


class ParseError(DDSError, ValueError):
    pass


class DepthError(DDSError, ValueError):
    def __init__(self, message: str, max_count: int):
        super().__init__(message)
        self.max_count = max_count
