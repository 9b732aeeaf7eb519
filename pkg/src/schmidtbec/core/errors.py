"""Exception hierarchy shared by the analytic, solver and bench layers."""

from typing import Optional


class SchmidtBecError(Exception):
    """Base class for every error raised by schmidtbec."""
    pass


class DomainError(SchmidtBecError, ValueError):
    """Raised when an argument lies outside the domain of a formula."""
    pass


class DegenerateInputError(DomainError):
    """Raised for inputs where a quantity is undefined, e.g. N = 1 radii."""
    pass


class GridCoverageError(DomainError):
    """Raised when a grid is too small to hold the requested field."""
    pass


class NumericalError(SchmidtBecError):
    """Base class for failures of a numerical procedure."""
    pass


class RootBracketError(NumericalError):
    """Raised when a bracketed root search cannot find a sign change."""
    pass


class SeriesDivergenceError(NumericalError):
    """Raised when a series hits its term guard before converging."""
    pass


class ConvergenceError(NumericalError):
    """Raised when an iterative solver exhausts its iteration budget."""

    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(f"{message} (residual={residual:.3e}, iterations={iterations})")
        self.residual = residual
        self.iterations = iterations


class StepSizeError(NumericalError):
    """Raised when the evolved field becomes non-finite."""

    def __init__(self, dt: float, iteration: int, suggestion: Optional[float] = None):
        suggestion = dt / 2 if suggestion is None else suggestion
        super().__init__(
            f"non-finite field at iteration {iteration} with dt={dt:g}; "
            f"retry with a smaller dt (e.g. {suggestion:g})"
        )
        self.dt = dt
        self.iteration = iteration
        self.suggestion = suggestion
