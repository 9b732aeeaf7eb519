"""Regime calculus: critical atom numbers, expansion parameter and TF radius scales.

All functions take a ProblemSpec and return internal units (lengths in rho0)
unless the name says otherwise.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from scipy.optimize import brentq

from ..core.errors import DegenerateInputError, DomainError
from .quadrature import radial_quad, unit_ball_volume
from .units import ProblemSpec

logger = logging.getLogger(__name__)

# Upsilon_T * hbar*omega_T / eta_T^2 for harmonic transverse traps, keyed by d
UPSILON_HARMONIC = {
    1: 0.5 * math.log(4.0 / 3.0),
    2: math.log(8.0 - 4.0 * math.sqrt(3.0)),
}


class RegimeLabel(Enum):
    """Where an atom number sits relative to N_L and N_T."""
    BELOW_TF = "BelowTF"
    REDUCED_DIM = "ReducedDim"
    CROSSOVER = "Crossover"


@dataclass(frozen=True)
class RegimeReport:
    """Derived scales of a problem; lengths in meters."""
    rho0: float
    r0: float
    N_L: float
    N_T: float
    epsilon: float
    R_L0: float
    R_L0_at_NT: float
    regime_label: RegimeLabel

    @property
    def aspect_ratio(self) -> float:
        """r0 / rho0 of the bare trap."""
        return self.r0 / self.rho0

    @property
    def cloud_aspect_ratio_at_NT(self) -> float:
        """R_L0(N_T) / rho0."""
        return self.R_L0_at_NT / self.rho0


def _require_harmonic(spec: ProblemSpec, what: str) -> None:
    if not spec.trap.is_harmonic:
        raise DomainError(f"{what} has a closed form for harmonic traps only (q=2), got q={spec.q}")


def lower_critical_N(spec: ProblemSpec) -> float:
    """N_L = 1 + d sqrt(pi/2) (r0 / 2a) (rho0 / r0)^D."""
    _require_harmonic(spec, "N_L")
    d, D, r0, a = spec.d, spec.D, spec.r0, spec.a
    return 1.0 + d * math.sqrt(math.pi / 2.0) * (r0 / (2.0 * a)) * (1.0 / r0) ** D


def upper_critical_N(spec: ProblemSpec) -> float:
    """N_T, where interaction energy matches the transverse kinetic energy."""
    _require_harmonic(spec, "N_T")
    d, D, r0, a = spec.d, spec.D, spec.r0, spec.a
    prefactor = math.pi ** ((d - 1) / 2.0) / 8.0 ** ((d + 1) / 2.0)
    shape = (D * (d + 4)) ** (d / 2.0 + 1.0) / (d * (d + 2))
    return 1.0 + prefactor * shape * (1.0 / a) * r0 ** (2 * d)


def upper_critical_N_balance(spec: ProblemSpec) -> float:
    """N_T for any longitudinal exponent q, from the TF energy balance.

    Solves g (N - 1) eta_T eta_L / 2 = D/4 with the power-law TF profile,
    whose eta_L = 2 (q + d) / ((2q + d) V_d R_L0^d). Equals upper_critical_N at q = 2.
    """
    d, D, q = spec.d, spec.D, spec.q
    g_eta_T = spec.g * spec.eta_T
    radius_base = g_eta_T / spec.k * d * (q + d) / (q * math.pi ** (d - 1))
    density_ratio = D * (2 * q + d) * unit_ball_volume(d) / (4.0 * g_eta_T * (q + d))
    return 1.0 + density_ratio ** ((q + d) / q) * radius_base ** (d / q)


def expansion_parameter(spec: ProblemSpec) -> float:
    """Physical expansion parameter eps = 3 Upsilon_T/eta_T^2 ((N-1)/(N_T-1))^(2/(d+2))."""
    N_T = upper_critical_N(spec)
    ratio = (spec.atom_number - 1.0) / (N_T - 1.0)
    return ratio ** (2.0 / (spec.d + 2)) * 3.0 * UPSILON_HARMONIC[spec.d]


def tf_radius_zero(spec: ProblemSpec) -> float:
    """Zero-order longitudinal TF radius R_L0 for a power-law trap.

    Raises:
        DegenerateInputError: For N = 1, where there is no TF cloud.
    """
    if spec.atom_number <= 1:
        raise DegenerateInputError("TF radius is undefined for N = 1")
    d, q = spec.d, spec.q
    base = spec.g_tilde * spec.eta_T / spec.k * d * (q + d) / (q * math.pi ** (d - 1))
    return base ** (1.0 / (q + d))


def tf_radius_at_NT(spec: ProblemSpec) -> float:
    """R_L0 evaluated at N = N_T: sqrt(D (d + 4)) / 2 * r0^2 (in rho0)."""
    _require_harmonic(spec, "R_L0(N_T)")
    return math.sqrt(spec.D * (spec.d + 4)) / 2.0 * spec.r0 ** 2


def classify(spec: ProblemSpec, N_L: float, N_T: float) -> RegimeLabel:
    N = spec.atom_number
    if N < N_L:
        return RegimeLabel.BELOW_TF
    if N <= N_T:
        return RegimeLabel.REDUCED_DIM
    return RegimeLabel.CROSSOVER


def regime_report(spec: ProblemSpec) -> RegimeReport:
    """Collect the derived scales of ``spec`` into a RegimeReport."""
    units = spec.units
    N_L = lower_critical_N(spec)
    N_T = upper_critical_N(spec)
    R_L0 = tf_radius_zero(spec) if spec.atom_number > 1 else 0.0
    label = classify(spec, N_L, N_T)
    if label is RegimeLabel.BELOW_TF:
        logger.warning(
            f"N={spec.atom_number:g} is below N_L={N_L:.1f}; the longitudinal TF picture is poor"
        )
    return RegimeReport(
        rho0=units.length,
        r0=units.to_si_length(spec.r0),
        N_L=N_L,
        N_T=N_T,
        epsilon=expansion_parameter(spec),
        R_L0=units.to_si_length(R_L0),
        R_L0_at_NT=units.to_si_length(tf_radius_at_NT(spec)),
        regime_label=label,
    )


def critical_numbers_by_quadrature(spec: ProblemSpec) -> Tuple[float, float]:
    """N_L and N_T from the energy-balance integrals, evaluated by quadrature.

    N_L balances interaction against longitudinal kinetic energy for the bare
    Gaussian product; N_T balances it against transverse kinetic energy for a
    Gaussian times the longitudinal TF profile.
    """
    _require_harmonic(spec, "critical-number balance")
    d, D, r0, g = spec.d, spec.D, spec.r0, spec.g

    xi0_sq = lambda rho: math.exp(-rho ** 2) / math.pi ** (D / 2.0)
    eta_T = radial_quad(lambda rho: xi0_sq(rho) ** 2, D, math.inf)
    kinetic_T = 0.5 * radial_quad(lambda rho: rho ** 2 * xi0_sq(rho), D, math.inf)

    phi0_sq = lambda r: math.exp(-r ** 2 / r0 ** 2) / (math.pi * r0 ** 2) ** (d / 2.0)
    eta_bare_L = radial_quad(lambda r: phi0_sq(r) ** 2, d, 10.0 * r0)
    kinetic_L = 0.5 * radial_quad(lambda r: (r / r0 ** 2) ** 2 * phi0_sq(r), d, 10.0 * r0)
    N_L = 1.0 + 2.0 * kinetic_L / (g * eta_T * eta_bare_L)

    volume = unit_ball_volume(d)

    def tf_eta_L(log_n_minus_1: float) -> float:
        R = tf_radius_zero(spec.with_atom_number(1.0 + math.exp(log_n_minus_1)))
        amp = (2 + d) / (volume * 2 * R ** d)
        return radial_quad(lambda r: (amp * (1.0 - (r / R) ** 2)) ** 2, d, R)

    def balance(log_n_minus_1: float) -> float:
        interaction = 0.5 * g * math.exp(log_n_minus_1) * eta_T * tf_eta_L(log_n_minus_1)
        return math.log(interaction / kinetic_T)

    log_nt = brentq(balance, -20.0, 60.0, xtol=1e-14, rtol=1e-12)
    logger.debug(f"quadrature balance: N_L={N_L:.6g}, N_T={1 + math.exp(log_nt):.6g}")
    return N_L, 1.0 + math.exp(log_nt)
