"""Exception hierarchy shared by every module of the package."""


class DantzigError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(DantzigError, ValueError):
    pass


class NonFiniteValue(DantzigError, ValueError):
    pass


class AsymmetricMatrix(DantzigError, ValueError):
    pass


class SingularMatrix(DantzigError, ValueError):
    pass


class RankDeficient(DantzigError, ValueError):
    pass


class ZeroColumn(DantzigError, ValueError):
    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"column {column} has (near) zero norm")


class DegenerateSample(DantzigError, ValueError):
    def __init__(self, message, column=None):
        self.column = column
        super().__init__(message)


class DegenerateGroup(DantzigError, ValueError):
    pass


class ConfigError(DantzigError, ValueError):
    pass


class ParseError(DantzigError, ValueError):
    def __init__(self, message, row=None, col=None):
        self.row = row
        self.col = col
        super().__init__(message)


class BudgetExceeded(DantzigError):
    """Raised when exhaustive subset enumeration would exceed its budget.

    ``count`` holds the exact number of subsets that would have been checked.
    """

    def __init__(self, count, budget):
        self.count = count
        self.budget = budget
        super().__init__(
            f"exhaustive enumeration needs {count} subsets, budget is {budget}")


class SolverError(DantzigError):
    """Base class for failures inside the LP engine or iterative estimators."""


class SolverBreakdown(SolverError):
    def __init__(self, message, iteration):
        self.iteration = iteration
        super().__init__(f"{message} (iteration {iteration})")


class IterationLimit(SolverError):
    """Iteration cap reached; ``result`` carries the last iterate."""

    def __init__(self, message, result=None):
        self.result = result
        super().__init__(message)


class InfeasibleProblem(SolverError):
    def __init__(self, message, residual_norm=None):
        self.residual_norm = residual_norm
        super().__init__(message)


class InternalInconsistency(SolverError):
    pass


class IoError(DantzigError, OSError):
    pass
