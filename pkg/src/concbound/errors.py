"""Exception hierarchy shared by all concbound modules."""


class ConcboundError(Exception):
    """Base class for all concbound errors."""


class ValidationError(ConcboundError, ValueError):
    """Base class for input-validation failures."""


class DimensionMismatch(ValidationError):
    pass


class NonHermitian(ValidationError):
    pass


class NotPSD(ValidationError):
    pass


class TraceNotOne(ValidationError):
    pass


class NotUnitary(ValidationError):
    pass


class InvalidParams(ValidationError):
    pass


class RankTooHigh(ValidationError):
    pass


class UnsupportedDims(ValidationError):
    pass


class DomainError(ConcboundError, ArithmeticError):
    """A numerical quantity left its mathematically admissible domain."""


class ConvergenceFailure(ConcboundError, RuntimeError):
    """An iterative numerical routine failed to converge."""
