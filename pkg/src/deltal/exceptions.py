"""Exception hierarchy.

Every error raised on bad input derives from :class:`DeltaLError`, which is
itself a :class:`ValueError`, so callers that only care about "bad data" can
catch either.
"""


class DeltaLError(ValueError):
    """Base class for all data and parameter errors in this package."""


class NonFiniteError(DeltaLError):
    pass


class EmptyInputError(DeltaLError):
    pass


class BoundsError(DeltaLError):
    """An index, window length or range lies outside what the data admits."""


class DegenerateFitError(DeltaLError):
    """A least-squares line was requested over fewer than two points."""


class ZeroFluctuationError(DeltaLError):
    """log F(L) is undefined because some F(L) is zero."""


class InsufficientPointsError(DeltaLError):
    pass


class DomainError(DeltaLError):
    pass


class SpecError(DeltaLError):
    """Invalid generator parameters."""


class ParseError(DeltaLError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class EmptyMatrixError(DeltaLError):
    pass
