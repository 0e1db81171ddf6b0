"""Exception hierarchy shared by every module.

Input/data problems derive from :class:`QualityOptionError`, which is a
``ValueError``; numerical failures (non positive-definite correlation
matrices) derive from ``ArithmeticError`` so callers can map them to a
distinct exit status.
"""


class QualityOptionError(ValueError):
    """Base class for invalid inputs and data problems."""


class ParseError(QualityOptionError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(QualityOptionError):
    """A value lies outside its admissible range (e.g. a non-positive price)."""


class DuplicateError(QualityOptionError):
    pass


class InsufficientDataError(QualityOptionError):
    pass


class DegenerateInputError(QualityOptionError):
    def __init__(self, message, asset_id=None):
        self.asset_id = asset_id
        super().__init__(message)


class InvalidBasketError(QualityOptionError):
    pass


class NotPositiveDefiniteError(ArithmeticError):
    """Cholesky pivot fell below tolerance.

    ``minor`` is the 1-based order of the first leading principal minor
    that is not positive definite.
    """

    def __init__(self, minor, pivot):
        self.minor = minor
        self.pivot = pivot
        super().__init__(
            f"correlation matrix is not positive definite: leading minor of "
            f"order {minor} has pivot {pivot:.3e}"
        )
