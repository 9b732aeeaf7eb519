"""Imaginary-time split-step relaxation of the 3D GP equation.

Fields are real; kinetic steps use real FFTs. Internal units throughout.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy.fft import irfft, irfftn, rfft, rfftfreq, rfftn

from ..core.errors import ConvergenceError, DomainError, StepSizeError
from ..physics.assembly import assemble_wavefunction
from ..physics.schmidt import DEFAULT_N_MAX
from ..physics.units import ProblemSpec
from .grid import Grid


@dataclass
class Numerics:
    """Relaxation controls; ``fixed_iterations`` disables the convergence test."""
    dt: float = 1e-3
    tol: float = 1e-10
    max_iters: int = 200_000
    initial_state: str = "gaussian"
    fixed_iterations: Optional[int] = None
    energy_every: int = 100
    fft_workers: int = 1
    # transverse modes of the analytic starting state
    n_max: int = DEFAULT_N_MAX


@dataclass(frozen=True)
class EnergyParts:
    """Energy functional split by operator (units of hbar*omega_T)."""
    kinetic_T: float
    kinetic_L: float
    potential_T: float
    potential_L: float
    interaction: float

    @property
    def total(self) -> float:
        """GP energy per particle."""
        return (self.kinetic_T + self.kinetic_L + self.potential_T + self.potential_L
                + self.interaction)

    @property
    def mu(self) -> float:
        """Chemical potential: kinetic + potential + 2 x interaction."""
        return self.total + self.interaction

    def as_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass
class GroundState:
    """Relaxed field on ``grid`` with its chemical potential and diagnostics."""
    psi: np.ndarray
    mu: float
    energy_parts: EnergyParts
    residual: float
    iterations: int
    grid: Grid
    atom_number: float
    energy_history: List[Tuple[int, float]] = field(default_factory=list)

    @property
    def norm(self) -> float:
        return float(np.sum(self.psi ** 2) * self.grid.cell_volume)


def trap_potential(spec: ProblemSpec, grid: Grid) -> Tuple[np.ndarray, np.ndarray]:
    """Transverse and longitudinal potentials, broadcastable to the grid."""
    rho, r = grid.radii()
    return 0.5 * rho ** 2, 0.5 * spec.k * r ** spec.q


def gaussian_state(spec: ProblemSpec, grid: Grid) -> np.ndarray:
    """Bare-trap Gaussian product, unit norm."""
    rho, r = grid.radii()
    psi = np.exp(-rho ** 2 / 2.0) * np.exp(-r ** 2 / (2.0 * spec.r0 ** 2))
    psi = np.broadcast_to(psi, grid.points).copy()
    return psi / math.sqrt(np.sum(psi ** 2) * grid.cell_volume)


def initial_state(spec: ProblemSpec, grid: Grid, kind: str = "gaussian",
                  n_max: int = DEFAULT_N_MAX) -> np.ndarray:
    """Starting field: ``gaussian`` (bare trap) or ``analytic`` (two-term Schmidt state)."""
    if kind == "gaussian" or spec.atom_number <= 1:
        return gaussian_state(spec, grid)
    if kind == "analytic":
        psi = assemble_wavefunction(spec, grid, n_max)
        return np.broadcast_to(psi, grid.points).copy()
    raise DomainError(f"unknown initial state {kind!r}")


def _axis_derivative(psi: np.ndarray, grid: Grid, ax: int, workers: int) -> np.ndarray:
    n, h = grid.points[ax], grid.spacing[ax]
    k = 2 * math.pi * rfftfreq(n, h)
    if n % 2 == 0:
        k[-1] = 0.0  # Nyquist mode has no real derivative
    shape = [1] * psi.ndim
    shape[ax] = k.size
    spectrum = rfft(psi, axis=ax, workers=workers) * (1j * k.reshape(shape))
    return irfft(spectrum, n=n, axis=ax, workers=workers)


def energy_parts_of(psi: np.ndarray, spec: ProblemSpec, grid: Grid,
                    workers: int = 1) -> EnergyParts:
    """Split the GP energy of a unit-norm field by spectral derivatives and midpoint quadrature."""
    dV = grid.cell_volume
    kinetic = {}
    for ax in range(3):
        kinetic[ax] = 0.5 * float(np.sum(_axis_derivative(psi, grid, ax, workers) ** 2)) * dV
    V_T, V_L = trap_potential(spec, grid)
    density = psi ** 2
    return EnergyParts(
        kinetic_T=sum(kinetic[ax] for ax in grid.transverse_axes),
        kinetic_L=sum(kinetic[ax] for ax in grid.longitudinal_axes),
        potential_T=float(np.sum(V_T * density)) * dV,
        potential_L=float(np.sum(V_L * density)) * dV,
        interaction=0.5 * spec.g_tilde * float(np.sum(density ** 2)) * dV,
    )


def chemical_potential_of(state: GroundState, spec: ProblemSpec, grid: Grid,
                          workers: int = 1) -> float:
    """mu = <psi| H_T + H_L + g~ psi^2 |psi>."""
    return energy_parts_of(state.psi, spec, grid, workers).mu


def average_density_of(state: GroundState, grid: Grid) -> float:
    """N eta = N * integral of psi^4."""
    return state.atom_number * float(np.sum(state.psi ** 4)) * grid.cell_volume


class ImaginaryTimeSolver:
    """Strang-split imaginary-time propagation with renormalization every step."""

    def __init__(self, spec: ProblemSpec, grid: Grid, numerics: Optional[Numerics] = None):
        self.spec = spec
        self.grid = grid
        self.numerics = numerics or Numerics()
        self.logger = logging.getLogger(f"{__name__}.{self.__class__.__name__}")

        dt = self.numerics.dt
        k2 = sum(k ** 2 for k in grid.wavenumbers())
        self._half_kinetic = np.exp(-k2 * dt / 4.0)
        V_T, V_L = trap_potential(spec, grid)
        self._potential = np.broadcast_to(V_T + V_L, grid.points).copy()

    def _step(self, psi: np.ndarray) -> np.ndarray:
        workers = self.numerics.fft_workers
        shape = self.grid.points
        psi = irfftn(rfftn(psi, workers=workers) * self._half_kinetic, s=shape, workers=workers)
        psi *= np.exp(-(self._potential + self.spec.g_tilde * psi ** 2) * self.numerics.dt)
        return irfftn(rfftn(psi, workers=workers) * self._half_kinetic, s=shape, workers=workers)

    def run(self, psi: Optional[np.ndarray] = None) -> GroundState:
        """Relax from ``psi`` (or the configured initial state) to the ground state.

        Raises:
            StepSizeError: If the field becomes non-finite.
            ConvergenceError: If max_iters passes without meeting tol.
        """
        numerics = self.numerics
        grid, spec = self.grid, self.spec
        dV = grid.cell_volume
        if psi is None:
            psi = initial_state(spec, grid, numerics.initial_state, numerics.n_max)
        psi = np.asarray(psi, dtype=np.float64)

        limit = numerics.fixed_iterations or numerics.max_iters
        history: List[Tuple[int, float]] = []
        mu_prev = math.nan
        residual = math.inf
        iteration = 0
        converged = False

        self.logger.info(
            f"Relaxing N={spec.atom_number:g} on {grid.points} "
            f"(dt={numerics.dt:g}, tol={numerics.tol:g})"
        )
        for iteration in range(1, limit + 1):
            psi = self._step(psi)
            norm2 = float(np.sum(psi ** 2)) * dV
            if not math.isfinite(norm2) or norm2 <= 0.0:
                raise StepSizeError(numerics.dt, iteration)
            mu_est = -math.log(norm2) / (2.0 * numerics.dt)
            psi /= math.sqrt(norm2)

            residual = abs(mu_est - mu_prev) / max(abs(mu_est), 1e-300)
            mu_prev = mu_est

            if numerics.energy_every and iteration % numerics.energy_every == 0:
                energy = energy_parts_of(psi, spec, grid, numerics.fft_workers).total
                history.append((iteration, energy))
                self.logger.debug(f"iter {iteration}: mu~{mu_est:.10g}, residual={residual:.2e}")

            if numerics.fixed_iterations is None and residual < numerics.tol:
                converged = True
                break

        if numerics.fixed_iterations is None and not converged:
            raise ConvergenceError("imaginary-time relaxation did not converge",
                                   residual, iteration)

        parts = energy_parts_of(psi, spec, grid, numerics.fft_workers)
        self.logger.info(
            f"Relaxed in {iteration} iterations: mu={parts.mu:.8g}, residual={residual:.2e}")
        return GroundState(
            psi=psi,
            mu=parts.mu,
            energy_parts=parts,
            residual=residual,
            iterations=iteration,
            grid=grid,
            atom_number=spec.atom_number,
            energy_history=history,
        )


def relax_ground_state(spec: ProblemSpec, grid: Grid, numerics: Optional[Numerics] = None,
                       psi0: Optional[np.ndarray] = None) -> GroundState:
    """Relax the GP ground state of ``spec`` on ``grid``."""
    if not spec.atom_number == int(spec.atom_number):
        raise DomainError(f"the 3D solver needs an integral atom number, got {spec.atom_number}")
    return ImaginaryTimeSolver(spec, grid, numerics).run(psi0)
