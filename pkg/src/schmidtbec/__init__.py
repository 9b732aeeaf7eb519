"""
schmidtbec - Schmidt-decomposition model of highly anisotropic condensates.

Closed-form chemical potential, average density and purity of quasi-1D and
quasi-2D Bose-Einstein condensates, checked against a variational Gaussian
model and a 3D Gross-Pitaevskii ground-state solver.
"""

__version__ = "0.1.0"

# Import key classes for easier access
from .core.errors import DomainError, NumericalError, SchmidtBecError
from .physics.regimes import regime_report
from .physics.schmidt import RadiusMode, reduced_model
from .physics.units import AtomSpecies, ProblemSpec, TrapSpec

__all__ = [
    "AtomSpecies",
    "DomainError",
    "NumericalError",
    "ProblemSpec",
    "RadiusMode",
    "SchmidtBecError",
    "TrapSpec",
    "reduced_model",
    "regime_report",
]
