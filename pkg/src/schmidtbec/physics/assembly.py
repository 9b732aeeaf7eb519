"""Two-term Schmidt state sampled on a solver grid."""

import logging
from typing import TYPE_CHECKING

import numpy as np

from .schmidt import (
    DEFAULT_N_MAX,
    RadiusMode,
    geometry_constants,
    phi0_squared,
    phi1_profile,
    solve_RL,
    transverse_schmidt,
)
from .units import ProblemSpec

if TYPE_CHECKING:
    from ..solver.grid import Grid

logger = logging.getLogger(__name__)


def assemble_wavefunction(spec: ProblemSpec, grid: "Grid",
                          n_max: int = DEFAULT_N_MAX) -> np.ndarray:
    """psi = sqrt(lambda_0) chi_0 phi_0 + chi_1 phi_1 on ``grid``, unit norm.

    chi_1 already carries sqrt(lambda_1); lambda_0 = 1 - lambda_1.

    Raises:
        GridCoverageError: If the grid does not cover 4 rho0 and 1.5 R_L.
        DegenerateInputError: For N = 1.
    """
    geom = geometry_constants(spec)
    R_L, _ = solve_RL(spec, RadiusMode.EXACT, geom)
    grid.check_coverage(max(R_L, geom.R_L0))

    chi0, chi1, lambda1 = transverse_schmidt(spec, n_max)
    rho, r = grid.radii()
    phi0 = np.sqrt(phi0_squared(spec, r, R_L, geom))
    phi1 = phi1_profile(spec, r, geom)

    psi = (np.sqrt(max(1.0 - lambda1, 0.0)) * chi0.evaluate(rho) * phi0
           + chi1.evaluate(rho) * phi1)
    norm = np.sqrt(np.sum(psi ** 2) * grid.cell_volume)
    logger.debug(f"assembled Schmidt state: lambda1={lambda1:.3e}, raw norm={norm:.6f}")
    return psi / norm
