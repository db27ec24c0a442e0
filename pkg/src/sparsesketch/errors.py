"""Exception types shared across the package.

Two families: ``ValueError`` subclasses signal bad inputs or configuration
(caught before any oracle query), ``ArithmeticError`` subclasses signal
numerical failures discovered mid-computation. The CLI maps the families to
exit codes 2 and 3 respectively.
"""


class UnderdeterminedSystemError(ValueError):
    """Least-squares system has fewer equations than unknowns."""


class InsufficientQueriesError(ValueError):
    """Sketch width is smaller than some row's slot count."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class MatrixMarketError(ValueError):
    """Malformed Matrix Market file."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


class RankDeficiencyError(ArithmeticError):
    """Numerically rank-deficient least-squares system."""

    def __init__(self, message, rank=None, row=None):
        super().__init__(message)
        self.rank = rank
        self.row = row


class SingularMatrixError(ArithmeticError):
    """Matrix factorization hit a zero pivot."""


class UndefinedEstimateError(ArithmeticError):
    """A stochastic estimate is undefined (zero denominator)."""

    def __init__(self, message, entry=None):
        super().__init__(message)
        self.entry = entry
