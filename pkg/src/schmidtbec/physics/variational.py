"""Variational Gaussian ansatz with a longitudinally varying transverse width.

Only the TF-regime perturbative solutions are implemented. Quasi-2D radial
integrals use the measure 2*pi*r dr, with f_2 normalized under it.
"""

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Sequence

import numpy as np
from scipy.optimize import brentq

from ..core.errors import DegenerateInputError, DomainError, RootBracketError
from .quadrature import radial_nodes
from .units import ProblemSpec

if TYPE_CHECKING:
    from ..solver.grid import Grid

logger = logging.getLogger(__name__)

# a~ |f|^2 above which the small-density expansions are questionable
PERTURBATIVE_LIMIT = 0.3
DEFAULT_SAMPLES = 400
SQRT_PI = math.sqrt(math.pi)
SQRT_2 = math.sqrt(2.0)


@dataclass(frozen=True)
class VariationalSolution:
    """Solved profiles of the ansatz (internal units).

    ``r`` are longitudinal sample radii on [0, R_dL]; ``f_profile`` is
    |f_d|, ``sigma_profile`` the Gaussian width in rho0.
    """
    d: int
    r: np.ndarray
    sigma_profile: np.ndarray
    f_profile: np.ndarray
    mu_d: float
    mu_dL: float
    R_dL: float
    R_leading: float
    a_tilde: float
    k: float
    atom_number: float

    def f_squared(self, r: np.ndarray) -> np.ndarray:
        """|f_d(r)|^2 from the perturbative TF solution, zero outside R_dL."""
        r = np.abs(np.asarray(r, dtype=float))
        a = self.a_tilde
        potential = 0.5 * self.k * r ** 2
        if self.d == 1:
            x = (self.mu_dL - potential) / (2.0 * a)
            f2 = x + 0.75 * a * x ** 2
        else:
            x = (self.mu_dL - potential) / (2.0 * math.sqrt(2.0 * math.pi) * a)
            f2 = x + 3.0 * SQRT_PI * a / (4.0 * SQRT_2) * x ** 2
        return np.where(r <= self.R_dL, np.maximum(f2, 0.0), 0.0)

    def sigma(self, r: np.ndarray) -> np.ndarray:
        """Transverse Gaussian width sigma_d(r) in rho0."""
        f2 = self.f_squared(r)
        if self.d == 1:
            return np.sqrt(np.sqrt(1.0 + 2.0 * self.a_tilde * f2))
        return 1.0 + math.sqrt(math.pi / 2.0) * self.a_tilde * f2


def _solve_radius(coeff_low: float, coeff_high: float, power_low: int, power_high: int,
                  leading: float) -> float:
    """Positive root of 1 = c_lo R^p_lo + c_hi R^p_hi, bracketed around the leading root."""
    f = lambda R: coeff_low * R ** power_low + coeff_high * R ** power_high - 1.0
    lo, hi = 0.5 * leading, 2.0 * leading
    if not f(lo) < 0.0 < f(hi):
        raise RootBracketError(
            f"no sign change of the variational normalization in [{lo:g}, {hi:g}]")
    return brentq(f, lo, hi, xtol=1e-15 * leading, rtol=4 * np.finfo(float).eps)


def _check(spec: ProblemSpec, d: int) -> None:
    if spec.d != d:
        raise DomainError(f"expected a d={d} trap, got d={spec.d}")
    if not spec.trap.is_harmonic:
        raise DomainError("the variational TF solutions assume a harmonic longitudinal trap")
    if spec.atom_number <= 1:
        raise DegenerateInputError("variational TF radius is undefined for N = 1")


def leading_radius(spec: ProblemSpec) -> float:
    """Root of the normalization condition without its higher-order term."""
    a, k = spec.a_tilde, spec.k
    if spec.d == 1:
        return (3.0 * a / k) ** (1.0 / 3.0)
    return (8.0 * SQRT_2 * a / (SQRT_PI * k)) ** 0.25


def _finish(spec: ProblemSpec, R: float, mu_offset: float, n_samples: int) -> VariationalSolution:
    k = spec.k
    mu_dL = 0.5 * k * R ** 2
    r = np.linspace(0.0, R, n_samples)
    draft = VariationalSolution(
        d=spec.d, r=r, sigma_profile=np.empty(0), f_profile=np.empty(0),
        mu_d=mu_dL + mu_offset, mu_dL=mu_dL, R_dL=R, R_leading=leading_radius(spec),
        a_tilde=spec.a_tilde, k=k, atom_number=spec.atom_number,
    )
    f2 = draft.f_squared(r)
    peak = spec.a_tilde * float(f2.max())
    if peak > PERTURBATIVE_LIMIT:
        logger.warning(
            f"a~|f|^2 reaches {peak:.2f} at N={spec.atom_number:g}; "
            "the perturbative variational solution is outside its regime"
        )
    return VariationalSolution(
        d=draft.d, r=r, sigma_profile=draft.sigma(r), f_profile=np.sqrt(f2),
        mu_d=draft.mu_d, mu_dL=mu_dL, R_dL=R, R_leading=draft.R_leading,
        a_tilde=draft.a_tilde, k=k, atom_number=draft.atom_number,
    )


def solve_quasi1d(spec: ProblemSpec, n_samples: int = DEFAULT_SAMPLES) -> VariationalSolution:
    """Cigar solution: R_1L from 1 = k R^3/(3a~) + k^2 R^5/(20a~), mu_1 = mu_1L + 1."""
    _check(spec, 1)
    a, k = spec.a_tilde, spec.k
    R = _solve_radius(k / (3.0 * a), k ** 2 / (20.0 * a), 3, 5, leading_radius(spec))
    return _finish(spec, R, 1.0, n_samples)


def solve_quasi2d(spec: ProblemSpec, n_samples: int = DEFAULT_SAMPLES) -> VariationalSolution:
    """Pancake solution: R_2L from the quartic-plus-sextic normalization, mu_2 = mu_2L + 1/2."""
    _check(spec, 2)
    a, k = spec.a_tilde, spec.k
    c4 = SQRT_PI * k / (8.0 * SQRT_2 * a)
    c6 = SQRT_PI * k ** 2 / (128.0 * SQRT_2 * a)
    R = _solve_radius(c4, c6, 4, 6, leading_radius(spec))
    return _finish(spec, R, 0.5, n_samples)


def solve_variational(spec: ProblemSpec, n_samples: int = DEFAULT_SAMPLES) -> VariationalSolution:
    if spec.d == 1:
        return solve_quasi1d(spec, n_samples)
    return solve_quasi2d(spec, n_samples)


def variational_density_matrix(sol: VariationalSolution, samples: Sequence[float]) -> np.ndarray:
    """Longitudinal reduced density matrix n_L(r, r') on a sample set."""
    r = np.asarray(samples, dtype=float)
    f = np.sqrt(sol.f_squared(r))
    s = sol.sigma(r)
    ss = s[:, None] ** 2 + s[None, :] ** 2
    if sol.d == 1:
        return 2.0 * np.outer(f * s, f * s) / ss
    return np.sqrt(2.0 * np.outer(s, s) / ss) * np.outer(f, f)


@dataclass(frozen=True)
class VariationalObservables:
    purity: float
    N_eta: float
    N_eta_grid: Optional[float] = None


def variational_purity(sol: VariationalSolution, n_points: int = DEFAULT_SAMPLES) -> float:
    """Pi = double integral of n_L^2, evaluated as (int f^2)^2 - int int f^2 f'^2 (1 - K^2).

    K is the kernel divided by f f'; the second form avoids cancellation when
    Pi is close to 1.
    """
    r, w = radial_nodes(sol.d, sol.R_dL, n_points)
    f2 = sol.f_squared(r)
    s = sol.sigma(r)
    ss = s[:, None] ** 2 + s[None, :] ** 2
    if sol.d == 1:
        defect = ((s[:, None] ** 2 - s[None, :] ** 2) / ss) ** 2
    else:
        defect = (s[:, None] - s[None, :]) ** 2 / ss
    mass = float(np.dot(w, f2))
    weighted = w * f2
    purity = mass ** 2 - float(weighted @ defect @ weighted)
    return min(max(purity, 0.0), 1.0)


def variational_average_density(sol: VariationalSolution, n_points: int = DEFAULT_SAMPLES) -> float:
    """N eta with the transverse Gaussian integral done exactly."""
    r, w = radial_nodes(sol.d, sol.R_dL, n_points)
    f4 = sol.f_squared(r) ** 2
    s = sol.sigma(r)
    if sol.d == 1:
        integrand = f4 / (2.0 * math.pi * s ** 2)
    else:
        integrand = f4 / (math.sqrt(2.0 * math.pi) * s)
    return sol.atom_number * float(np.dot(w, integrand))


def build_ansatz(sol: VariationalSolution, rho: np.ndarray, r: np.ndarray) -> np.ndarray:
    """psi_d(rho, r) for broadcastable transverse and longitudinal radii."""
    s = sol.sigma(r)
    f = np.sqrt(sol.f_squared(r))
    # normalization pi^(-D/4) sigma^(-D/2) of the D-dimensional Gaussian
    D = 3 - sol.d
    return np.exp(-rho ** 2 / (2.0 * s ** 2)) / (math.pi ** (D / 4.0) * s ** (D / 2.0)) * f


def variational_observables(sol: VariationalSolution, grid: Optional["Grid"] = None,
                            n_points: int = DEFAULT_SAMPLES) -> VariationalObservables:
    """Purity and average density; with a grid, N eta is also integrated on it."""
    N_eta_grid = None
    if grid is not None:
        rho, r = grid.radii()
        psi = build_ansatz(sol, rho, r)
        N_eta_grid = sol.atom_number * float(np.sum(psi ** 4)) * grid.cell_volume
    return VariationalObservables(
        purity=variational_purity(sol, n_points),
        N_eta=variational_average_density(sol, n_points),
        N_eta_grid=N_eta_grid,
    )
