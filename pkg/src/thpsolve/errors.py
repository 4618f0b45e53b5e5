"""Exception hierarchy shared by all solver modules."""


class SolverError(Exception):
    """Base class for all thpsolve errors."""


class ConfigurationError(SolverError):
    """Invalid mesh, grid, problem description or config file."""


class DomainError(SolverError):
    """Evaluation requested outside the valid domain."""


class ConvergenceError(SolverError):
    """An iterative construction failed to converge."""


class NonvanishingError(SolverError):
    """No zero-free particular solution could be produced."""


class DegenerateSystemError(SolverError):
    """The collocation matrix is degenerate (e.g. all zeros)."""


class OptimizationError(SolverError):
    """The outer boundary search failed at every trial point."""


class ExpressionSyntaxError(ConfigurationError):
    """Malformed expression source; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ExpressionEvalError(SolverError):
    """Runtime domain violation while evaluating an expression."""
