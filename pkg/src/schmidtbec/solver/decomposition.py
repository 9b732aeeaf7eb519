"""Schmidt spectrum and purity of a discretized transverse/longitudinal field."""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import svd

from .grid import Grid
from .relaxation import GroundState

DEFAULT_MODES = 8


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Schmidt coefficients (descending) and the leading orthonormal mode pairs.

    ``chi_modes[n]`` is a transverse function over the flattened transverse
    points, ``phi_modes[n]`` a longitudinal one; both have unit norm under
    midpoint quadrature.
    """
    lambdas: np.ndarray
    chi_modes: np.ndarray
    phi_modes: np.ndarray

    @property
    def total(self) -> float:
        return float(np.sum(self.lambdas))


@dataclass(frozen=True)
class PurityReport:
    purity: float
    lambda1_estimate: float


def schmidt_decompose(state: GroundState, grid: Grid,
                      n_modes: int = DEFAULT_MODES) -> SchmidtSpectrum:
    """SVD of sqrt(dV) psi arranged as (transverse points) x (longitudinal points)."""
    weight_T = np.sqrt(grid.transverse_cell_volume)
    weight_L = np.sqrt(grid.longitudinal_cell_volume)
    matrix = grid.to_matrix(state.psi) * (weight_T * weight_L)
    u, s, vt = svd(matrix, full_matrices=False, check_finite=False)
    keep = min(n_modes, s.size)
    return SchmidtSpectrum(
        lambdas=s ** 2,
        chi_modes=(u[:, :keep] / weight_T).T,
        phi_modes=vt[:keep] / weight_L,
    )


def purity_of(spectrum: SchmidtSpectrum) -> PurityReport:
    """Pi = sum of lambda_n^2, clamped to [0, 1]."""
    lambdas = spectrum.lambdas
    purity = float(np.sum(lambdas ** 2))
    return PurityReport(
        purity=min(max(purity, 0.0), 1.0),
        lambda1_estimate=float(lambdas[1]) if lambdas.size > 1 else 0.0,
    )


def purity_by_density_matrix(state: GroundState, grid: Grid) -> float:
    """Trace of n_L^2 with n_L(r, r') integrated over the transverse plane directly."""
    matrix = grid.to_matrix(state.psi)
    n_L = (matrix.T @ matrix) * grid.transverse_cell_volume
    return float(np.sum(n_L ** 2)) * grid.longitudinal_cell_volume ** 2
