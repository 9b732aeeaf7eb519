"""First-order Schmidt perturbation theory in the longitudinal TF approximation.

Internal units throughout (hbar = M = omega_T = 1, lengths in rho0). The
perturbation bookkeeping parameter is set to 1 on output; zero-order values
and first-order corrections are kept as separate fields.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import eval_laguerre, gammaln

from ..core.errors import DegenerateInputError, RootBracketError
from .quadrature import radial_quad, unit_ball_volume
from .regimes import UPSILON_HARMONIC, lower_critical_N, tf_radius_zero
from .special import hypergeometric_pFq, polylog
from .units import ProblemSpec

logger = logging.getLogger(__name__)

DEFAULT_N_MAX = 60
RL_RTOL = 1e-12
MAX_BRACKET_WIDENINGS = 60


class RadiusMode(Enum):
    """How the longitudinal TF radius is obtained."""
    EXACT = "exact"
    FIRST_ORDER = "first-order"


class BasisLabel(Enum):
    HERMITE_1D = "Hermite1D"
    RADIAL_LAGUERRE_2D = "RadialLaguerre2D"


@dataclass(frozen=True)
class GeometryConstants:
    """Geometry-renormalized couplings (internal units)."""
    eta_T: float
    eta_L: float
    delta_eta_L: float
    upsilon_T: float
    g_eta_T: float
    three_body_coupling: float
    combo_con: float
    R_L0: float


def _phi00_amplitude(spec: ProblemSpec, R0: float) -> float:
    """phi00^2(0) for the TF profile of a power-law trap."""
    d, q = spec.d, spec.q
    return (q + d) / (unit_ball_volume(d) * q * R0 ** d)


def geometry_constants(spec: ProblemSpec) -> GeometryConstants:
    """eta_T, eta_L, Delta eta_L, Upsilon_T and the derived couplings.

    Harmonic longitudinal traps use closed forms; other power laws integrate
    the zero-order TF profile numerically.

    Raises:
        DegenerateInputError: For N = 1.
    """
    if spec.atom_number <= 1:
        raise DegenerateInputError("eta_L is undefined for N = 1 (R_L0 = 0)")
    d, q = spec.d, spec.q
    R0 = tf_radius_zero(spec)
    eta_T = spec.eta_T
    if spec.trap.is_harmonic:
        eta_L = d * (d + 2) / ((d + 4) * math.pi ** (d - 1) * R0 ** d)
        delta_eta_L = math.sqrt(d / (2.0 * (d + 6))) * eta_L
    else:
        amp = _phi00_amplitude(spec, R0)
        profile = lambda r: amp * (1.0 - (r / R0) ** q)
        eta_L = radial_quad(lambda r: profile(r) ** 2, d, R0)
        sixth = radial_quad(lambda r: profile(r) ** 3, d, R0)
        delta_eta_L = math.sqrt(max(sixth - eta_L ** 2, 0.0))
    upsilon_T = UPSILON_HARMONIC[d] * eta_T ** 2
    g = spec.g
    return GeometryConstants(
        eta_T=eta_T,
        eta_L=eta_L,
        delta_eta_L=delta_eta_L,
        upsilon_T=upsilon_T,
        g_eta_T=g * eta_T,
        three_body_coupling=3.0 * g ** 2 * upsilon_T,
        combo_con=spec.g_tilde * eta_T * eta_L,
        R_L0=R0,
    )


# ---------------------------------------------------------------------------
# transverse mode overlaps


def transverse_overlaps(D: int, n_max: int) -> Tuple[np.ndarray, np.ndarray]:
    """Excitation energies E_n - E_0 and overlaps <xi_n|xi_0^3> / eta_T, n = 0..n_max.

    D = 2 indexes radial (m = 0) modes, the only ones with nonzero overlap.
    D = 1 odd modes have zero overlap.
    """
    n = np.arange(n_max + 1)
    if D == 2:
        return 2.0 * n, 2.0 ** (-n.astype(float))
    overlaps = np.zeros(n_max + 1)
    even = n[n % 2 == 0]
    log_mag = gammaln((even + 1) / 2.0) - 0.5 * (math.log(math.pi) + gammaln(even + 1.0))
    overlaps[even] = np.where((even // 2) % 2 == 0, 1.0, -1.0) * np.exp(log_mag)
    return n.astype(float), overlaps


def upsilon_series(spec: ProblemSpec, n_max: int = DEFAULT_N_MAX) -> float:
    """Upsilon_T as the truncated mode sum of overlap^2 / (E_n - E_0)."""
    if n_max < 2:
        raise ValueError(f"n_max must be at least 2, got {n_max}")
    energies, overlaps = transverse_overlaps(spec.D, n_max)
    eta_T = spec.eta_T
    return eta_T ** 2 * float(np.sum(overlaps[1:] ** 2 / energies[1:]))


def transverse_eigenfunctions(D: int, n_max: int, rho: np.ndarray) -> np.ndarray:
    """Rows xi_n(rho), n = 0..n_max, of the harmonic transverse basis."""
    rho = np.asarray(rho, dtype=float)
    out = np.empty((n_max + 1,) + rho.shape)
    if D == 2:
        t = rho ** 2
        envelope = np.exp(-t / 2.0) / math.sqrt(math.pi)
        for n in range(n_max + 1):
            out[n] = eval_laguerre(n, t) * envelope
        return out
    # normalized Hermite functions by three-term recurrence
    out[0] = math.pi ** -0.25 * np.exp(-rho ** 2 / 2.0)
    if n_max >= 1:
        out[1] = math.sqrt(2.0) * rho * out[0]
    for n in range(1, n_max):
        out[n + 1] = (math.sqrt(2.0 / (n + 1)) * rho * out[n]
                      - math.sqrt(n / (n + 1.0)) * out[n - 1])
    return out


@dataclass(frozen=True)
class ModeExpansion:
    """Coefficients of a transverse function in the bare-trap eigenbasis."""
    coefficients: np.ndarray
    basis_label: BasisLabel

    @property
    def D(self) -> int:
        return 1 if self.basis_label is BasisLabel.HERMITE_1D else 2

    @property
    def norm_squared(self) -> float:
        return float(np.sum(self.coefficients ** 2))

    def evaluate(self, rho: np.ndarray) -> np.ndarray:
        """Sample the expansion at transverse radii (signed coordinate for D = 1)."""
        basis = transverse_eigenfunctions(self.D, len(self.coefficients) - 1, rho)
        return np.tensordot(self.coefficients, basis, axes=1)


def transverse_schmidt(spec: ProblemSpec, n_max: int = DEFAULT_N_MAX
                       ) -> Tuple[ModeExpansion, ModeExpansion, float]:
    """Mode expansions of chi_0 and chi_1, and lambda_1 = <chi_1|chi_1>.

    chi_1 carries sqrt(lambda_1) in its normalization.
    """
    if n_max < 4:
        raise ValueError(f"n_max must be at least 4, got {n_max}")
    label = BasisLabel.HERMITE_1D if spec.D == 1 else BasisLabel.RADIAL_LAGUERRE_2D
    chi0 = np.zeros(n_max + 1)
    chi0[0] = 1.0
    chi1 = np.zeros(n_max + 1)
    if spec.atom_number > 1:
        geom = geometry_constants(spec)
        energies, overlaps = transverse_overlaps(spec.D, n_max)
        response = spec.eta_T * overlaps[1:] / energies[1:]
        chi0[1:] = -spec.g_tilde * geom.eta_L * response
        chi1[1:] = -spec.g_tilde * geom.delta_eta_L * response
    lambda1 = float(np.sum(chi1 ** 2))
    return ModeExpansion(chi0, label), ModeExpansion(chi1, label), lambda1


def lambda1_closed(spec: ProblemSpec) -> float:
    """Closed form of lambda_1 via Li_2(1/4) (cigar) or 4F3 (pancake)."""
    if spec.atom_number <= 1:
        return 0.0
    geom = geometry_constants(spec)
    prefactor = spec.a_tilde ** 2 * geom.delta_eta_L ** 2
    if spec.d == 1:
        return prefactor * polylog(2, 0.25).value
    series = hypergeometric_pFq([1.0, 1.0, 1.0, 1.5], [2.0, 2.0, 2.0], 0.25)
    return prefactor * (math.pi / 4.0) * series.value


def purity_first_order(spec: ProblemSpec) -> float:
    """Pi = 1 - 2 lambda_1, clamped to [0, 1]."""
    purity = 1.0 - 2.0 * lambda1_closed(spec)
    if purity < 0.0:
        logger.warning(
            f"first-order purity {purity:.3g} is negative at N={spec.atom_number:g}; clamping to 0"
        )
    return min(max(purity, 0.0), 1.0)


# ---------------------------------------------------------------------------
# longitudinal TF radius and chemical potential


def _rl_coefficients(spec: ProblemSpec, geom: GeometryConstants) -> Tuple[float, float]:
    """C and B of the normalization condition 1 = C (1 + B k R^q) R^(q+d)."""
    d, q, k = spec.d, spec.q, spec.k
    C = k * q * math.pi ** (d - 1) / (spec.g_tilde * geom.eta_T * d * (q + d))
    B = 3.0 * geom.upsilon_T / geom.eta_T ** 2 * q / (2.0 * q + d)
    return C, B


def normalization_residual(spec: ProblemSpec, R: float,
                           geom: Optional[GeometryConstants] = None) -> float:
    """C (1 + B k R^q) R^(q+d) - 1; zero at the exact TF radius."""
    geom = geom or geometry_constants(spec)
    C, B = _rl_coefficients(spec, geom)
    return C * (1.0 + B * spec.k * R ** spec.q) * R ** (spec.q + spec.d) - 1.0


def _first_order_radius(spec: ProblemSpec, geom: GeometryConstants) -> Tuple[float, float]:
    """(R_L0, R_L1) with R_L1 the first-order correction."""
    d, q, k = spec.d, spec.q, spec.k
    R0 = geom.R_L0
    R1 = -(3.0 * geom.upsilon_T / geom.eta_T ** 2) * q / ((2 * q + d) * (q + d)) * k * R0 ** (q + 1)
    return R0, R1


def _exact_radius(spec: ProblemSpec, geom: GeometryConstants) -> float:
    R0 = geom.R_L0
    f = lambda R: normalization_residual(spec, R, geom)
    lo, hi = 0.5 * R0, 2.0 * R0
    for _ in range(MAX_BRACKET_WIDENINGS):
        if f(lo) < 0.0 < f(hi):
            break
        if f(lo) >= 0.0:
            lo *= 0.5
        if f(hi) <= 0.0:
            hi *= 2.0
    else:
        raise RootBracketError(f"no sign change of the TF normalization in [{lo:g}, {hi:g}]")
    logger.debug(f"TF radius bracket [{lo:.6g}, {hi:.6g}] around R_L0={R0:.6g}")
    return brentq(f, lo, hi, xtol=RL_RTOL * R0 * 1e-3, rtol=4 * np.finfo(float).eps)


def solve_RL(spec: ProblemSpec, mode: RadiusMode = RadiusMode.EXACT,
             geom: Optional[GeometryConstants] = None) -> Tuple[float, float]:
    """Longitudinal TF radius and mu_L = k R_L^q / 2.

    Raises:
        DegenerateInputError: For N = 1.
        RootBracketError: If no sign change can be bracketed.
    """
    geom = geom or geometry_constants(spec)
    if mode is RadiusMode.EXACT:
        R = _exact_radius(spec, geom)
    else:
        R0, R1 = _first_order_radius(spec, geom)
        R = R0 + R1
    return R, 0.5 * spec.k * R ** spec.q


def _mu_L_first_order(spec: ProblemSpec, geom: GeometryConstants) -> Tuple[float, float]:
    """(mu_L0, first-order correction) of the longitudinal chemical potential."""
    d, q, k = spec.d, spec.q, spec.k
    mu0 = 0.5 * k * geom.R_L0 ** q
    U = geom.upsilon_T / geom.eta_T ** 2
    shift = -3.0 * U * q ** 2 / ((2 * q + d) * (q + d)) * k * geom.R_L0 ** q
    return mu0, mu0 * shift


def chemical_potential(spec: ProblemSpec, mode: RadiusMode = RadiusMode.EXACT) -> float:
    """mu = E_0 + mu_L in units of hbar*omega_T."""
    if spec.atom_number <= 1:
        return spec.E0
    geom = geometry_constants(spec)
    if mode is RadiusMode.EXACT:
        _, mu_L = solve_RL(spec, RadiusMode.EXACT, geom)
    else:
        mu0, mu1 = _mu_L_first_order(spec, geom)
        mu_L = mu0 + mu1
    return spec.E0 + mu_L


# ---------------------------------------------------------------------------
# profiles and densities


@dataclass
class LongitudinalProfiles:
    """Longitudinal Schmidt functions sampled on radii ``r``."""
    r: np.ndarray
    phi0_sq: np.ndarray
    phi00_sq: np.ndarray
    phi1: np.ndarray
    eta_T_rectified: np.ndarray

    COLUMNS = ("r", "phi0_sq", "phi00_sq", "phi1", "eta_T_rectified")

    def to_records(self) -> List[Dict[str, float]]:
        """Row dictionaries for tabular export."""
        table = np.column_stack([getattr(self, c) for c in self.COLUMNS])
        return [dict(zip(self.COLUMNS, map(float, row))) for row in table]


def phi0_squared(spec: ProblemSpec, r: np.ndarray, R_L: float,
                 geom: GeometryConstants) -> np.ndarray:
    """First-order TF density X + (3 g~ Upsilon_T / eta_T) X^2, zero outside R_L."""
    r = np.abs(np.asarray(r, dtype=float))
    mu_L = 0.5 * spec.k * R_L ** spec.q
    x = (mu_L - 0.5 * spec.k * r ** spec.q) / (spec.g_tilde * geom.eta_T)
    x = np.where(r <= R_L, x, 0.0)
    return x + 3.0 * spec.g_tilde * geom.upsilon_T / geom.eta_T * x ** 2


def phi00_squared(spec: ProblemSpec, r: np.ndarray, geom: GeometryConstants) -> np.ndarray:
    """Zero-order TF density, zero outside R_L0."""
    r = np.abs(np.asarray(r, dtype=float))
    R0 = geom.R_L0
    amp = _phi00_amplitude(spec, R0)
    return np.where(r <= R0, amp * (1.0 - (r / R0) ** spec.q), 0.0)


def phi1_profile(spec: ProblemSpec, r: np.ndarray, geom: GeometryConstants) -> np.ndarray:
    """(phi00^2 - eta_L) phi00 / Delta eta_L, zero outside R_L0."""
    p2 = phi00_squared(spec, r, geom)
    inside = np.abs(np.asarray(r, dtype=float)) <= geom.R_L0
    return np.where(inside, (p2 - geom.eta_L) * np.sqrt(p2) / geom.delta_eta_L, 0.0)


def longitudinal_profiles(spec: ProblemSpec, r_samples: Sequence[float]) -> LongitudinalProfiles:
    """Sample phi0^2, phi00^2, phi1 and the rectified transverse inverse area."""
    if spec.trap.is_harmonic and spec.atom_number < lower_critical_N(spec):
        logger.warning(f"N={spec.atom_number:g} is below N_L; TF profiles are unreliable")
    geom = geometry_constants(spec)
    R_L, _ = solve_RL(spec, RadiusMode.EXACT, geom)
    r = np.asarray(r_samples, dtype=float)
    p0 = phi0_squared(spec, r, R_L, geom)
    if np.any(p0 < 0.0):
        logger.warning("negative phi0^2 inside the TF radius; clamping to zero")
        p0 = np.clip(p0, 0.0, None)
    return LongitudinalProfiles(
        r=r,
        phi0_sq=p0,
        phi00_sq=phi00_squared(spec, r, geom),
        phi1=phi1_profile(spec, r, geom),
        eta_T_rectified=geom.eta_T - 3.0 * spec.g_tilde * geom.upsilon_T * p0,
    )


@dataclass(frozen=True)
class AverageDensity:
    """N eta estimates in units of rho0^-3."""
    N_eta: float
    N_eta_dominant: float
    N_eta_zero_order: float


def eta_L_tilde(spec: ProblemSpec, geom: GeometryConstants,
                mode: RadiusMode = RadiusMode.FIRST_ORDER) -> float:
    """Integral of X^2 over the TF cloud: exact-root power law, or its first-order expansion."""
    d, q = spec.d, spec.q
    if mode is RadiusMode.EXACT:
        R_L, _ = solve_RL(spec, RadiusMode.EXACT, geom)
        return geom.eta_L * (R_L / geom.R_L0) ** (2 * q + d)
    shift = 3.0 * geom.upsilon_T / geom.eta_T ** 2 * q / (q + d) * spec.k * geom.R_L0 ** q
    return geom.eta_L * (1.0 - shift)


def average_density(spec: ProblemSpec, mode: RadiusMode = RadiusMode.FIRST_ORDER) -> AverageDensity:
    """N eta from both Schmidt terms, from the dominant term alone, and at zero order.

    The dominant-term value uses N eta_0 = N (eta + 4 g~ Upsilon_T Delta eta_L^2).
    """
    N = spec.atom_number
    if N <= 1:
        # a single atom in the bare Gaussian product
        bare = spec.eta_T * (2 * math.pi) ** (-spec.d / 2.0) * spec.r0 ** (-spec.d)
        return AverageDensity(N * bare, N * bare, N * bare)
    geom = geometry_constants(spec)
    eta = (geom.eta_T * eta_L_tilde(spec, geom, mode)
           + 2.0 * spec.g_tilde * geom.upsilon_T * (geom.eta_L ** 2 + geom.delta_eta_L ** 2))
    eta_dominant = eta + 4.0 * spec.g_tilde * geom.upsilon_T * geom.delta_eta_L ** 2
    return AverageDensity(
        N_eta=N * eta,
        N_eta_dominant=N * eta_dominant,
        N_eta_zero_order=N * geom.eta_T * geom.eta_L,
    )


def average_density_harmonic(spec: ProblemSpec) -> float:
    """Closed harmonic form N eta_T eta_L (1 - 24/((d+2)(d+6)) U k R_L0^2)."""
    geom = geometry_constants(spec)
    d = spec.d
    U = geom.upsilon_T / geom.eta_T ** 2
    s = spec.k * geom.R_L0 ** 2
    return spec.atom_number * geom.eta_T * geom.eta_L * (1.0 - 24.0 / ((d + 2) * (d + 6)) * U * s)


# ---------------------------------------------------------------------------
# bundled model


@dataclass
class ReducedModel:
    """All first-order outputs for one ProblemSpec (internal units)."""
    R_L: float
    R_L_first_order: float
    R_L0: float
    R_L1: float
    mu_L: float
    mu_L_first_order: float
    mu_L0: float
    mu_total: float
    mu_total_first_order: float
    lambda1: float
    purity: float
    eta: float
    eta_dominant: float
    eta_exact_root: float
    eta_L_tilde: float
    geometry: GeometryConstants
    chi0: ModeExpansion
    chi1: ModeExpansion
    profiles: Optional[LongitudinalProfiles] = None


def reduced_model(spec: ProblemSpec, n_max: int = DEFAULT_N_MAX,
                  r_samples: Optional[Sequence[float]] = None) -> ReducedModel:
    """Evaluate every first-order quantity of ``spec``.

    Raises:
        DegenerateInputError: For N = 1.
    """
    geom = geometry_constants(spec)
    R_L, mu_L = solve_RL(spec, RadiusMode.EXACT, geom)
    R0, R1 = _first_order_radius(spec, geom)
    mu0, mu1 = _mu_L_first_order(spec, geom)
    chi0, chi1, lambda1 = transverse_schmidt(spec, n_max)
    density = average_density(spec, RadiusMode.FIRST_ORDER)
    exact_density = average_density(spec, RadiusMode.EXACT)
    N = spec.atom_number
    return ReducedModel(
        R_L=R_L,
        R_L_first_order=R0 + R1,
        R_L0=R0,
        R_L1=R1,
        mu_L=mu_L,
        mu_L_first_order=mu0 + mu1,
        mu_L0=mu0,
        mu_total=spec.E0 + mu_L,
        mu_total_first_order=spec.E0 + mu0 + mu1,
        lambda1=lambda1,
        purity=min(max(1.0 - 2.0 * lambda1, 0.0), 1.0),
        eta=density.N_eta / N,
        eta_dominant=density.N_eta_dominant / N,
        eta_exact_root=exact_density.N_eta / N,
        eta_L_tilde=eta_L_tilde(spec, geom, RadiusMode.FIRST_ORDER),
        geometry=geom,
        chi0=chi0,
        chi1=chi1,
        profiles=longitudinal_profiles(spec, r_samples) if r_samples is not None else None,
    )
