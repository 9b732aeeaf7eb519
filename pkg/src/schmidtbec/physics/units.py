"""Physical constants, species, trap geometry and the internal unit system.

Everything below the API boundary works in units where hbar = M = omega_T = 1:
lengths are measured in the transverse oscillator length rho0, energies in
hbar*omega_T and times in 1/omega_T.
"""

import math
from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

from scipy.constants import atomic_mass, hbar, physical_constants, pi

from ..core.errors import DomainError

a_bohr = physical_constants['Bohr radius'][0]


@dataclass(frozen=True)
class AtomSpecies:
    """Atomic species of a repulsive condensate (SI units)."""
    mass: float
    scattering_length: float
    name: str = "custom"

    def __post_init__(self) -> None:
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")
        if not self.scattering_length > 0:
            raise DomainError(
                f"scattering length must be positive (repulsive), got {self.scattering_length}"
            )

    @classmethod
    def from_atomic_units(cls, mass_u: float, scattering_length_a0: float,
                          name: str = "custom") -> "AtomSpecies":
        return cls(mass_u * atomic_mass, scattering_length_a0 * a_bohr, name)


SPECIES: Dict[str, AtomSpecies] = {
    "Rb87": AtomSpecies.from_atomic_units(86.909, 100.4, "Rb87"),
}


def species_by_name(name: str) -> AtomSpecies:
    """Look up a registered species.

    Raises:
        DomainError: If the name is not registered.
    """
    try:
        return SPECIES[name]
    except KeyError:
        raise DomainError(f"unknown species {name!r}; known: {sorted(SPECIES)}") from None


@dataclass(frozen=True)
class TrapSpec:
    """Separable trap: harmonic transverse, power law V_L = k r^q / 2 longitudinally.

    Frequencies are angular (rad/s). ``k`` is the SI stiffness [J/m^q]; for
    q = 2 it may be left out and is then M omega_L^2.
    """
    omega_T: float
    omega_L: float
    d: int = 1
    q: float = 2.0
    k: Optional[float] = None

    def __post_init__(self) -> None:
        if self.d not in (1, 2):
            raise DomainError(f"longitudinal dimension d must be 1 or 2, got {self.d}")
        if not self.q > 0:
            raise DomainError(f"power-law exponent q must be positive, got {self.q}")
        if not (self.omega_T >= self.omega_L > 0):
            raise DomainError(
                f"need omega_T >= omega_L > 0, got omega_T={self.omega_T}, omega_L={self.omega_L}"
            )
        if self.k is None and not self.is_harmonic:
            raise DomainError("stiffness k is required when q != 2")

    @classmethod
    def from_hz(cls, omega_T_hz: float, omega_L_hz: float, d: int = 1,
                q: float = 2.0, k: Optional[float] = None) -> "TrapSpec":
        return cls(2 * pi * omega_T_hz, 2 * pi * omega_L_hz, d, q, k)

    @property
    def D(self) -> int:
        """Number of tightly confined (transverse) dimensions."""
        return 3 - self.d

    @property
    def is_harmonic(self) -> bool:
        return self.q == 2.0

    def stiffness(self, species: AtomSpecies) -> float:
        """SI stiffness k [J/m^q]."""
        if self.k is not None:
            return self.k
        return species.mass * self.omega_L ** 2


@dataclass(frozen=True)
class UnitSystem:
    """Scales of the internal unit system for one species and trap."""
    length: float  # rho0 [m]
    energy: float  # hbar*omega_T [J]
    time: float    # 1/omega_T [s]

    @classmethod
    def for_trap(cls, trap: TrapSpec, species: AtomSpecies) -> "UnitSystem":
        return cls(
            length=math.sqrt(hbar / (species.mass * trap.omega_T)),
            energy=hbar * trap.omega_T,
            time=1.0 / trap.omega_T,
        )

    def to_si_length(self, x: float) -> float:
        return x * self.length

    def from_si_length(self, x: float) -> float:
        return x / self.length

    def to_si_energy(self, e: float) -> float:
        return e * self.energy

    def from_si_energy(self, e: float) -> float:
        return e / self.energy

    def to_si_density(self, n: float, dims: int = 3) -> float:
        """Convert an inverse volume [rho0^-dims] to SI [m^-dims]."""
        return n / self.length ** dims


def oscillator_lengths(trap: TrapSpec, species: AtomSpecies) -> Tuple[float, float]:
    """Transverse and longitudinal oscillator lengths (rho0, r0) in meters.

    r0 = (hbar^2 / M k)^(1/(2+q)), which is sqrt(hbar / M omega_L) for q = 2.
    """
    rho0 = math.sqrt(hbar / (species.mass * trap.omega_T))
    k = trap.stiffness(species)
    r0 = (hbar ** 2 / (species.mass * k)) ** (1.0 / (2.0 + trap.q))
    return rho0, r0


@dataclass(frozen=True)
class ProblemSpec:
    """Species, trap and atom number: everything a run depends on physically.

    ``atom_number`` is real so that formula paths can trace continuous
    curves; the 3D solver insists on an integral value.
    """
    species: AtomSpecies
    trap: TrapSpec
    atom_number: float

    def __post_init__(self) -> None:
        if not self.atom_number >= 1:
            raise DomainError(f"atom number must be >= 1, got {self.atom_number}")

    @classmethod
    def reference_trap(cls, omega_T_hz: float, d: int, atom_number: float,
                       omega_L_hz: float = 3.5, species: str = "Rb87") -> "ProblemSpec":
        """Rb87 in a trap with the given cyclic frequencies."""
        return cls(species_by_name(species), TrapSpec.from_hz(omega_T_hz, omega_L_hz, d),
                   atom_number)

    def with_atom_number(self, atom_number: float) -> "ProblemSpec":
        return replace(self, atom_number=atom_number)

    @property
    def d(self) -> int:
        return self.trap.d

    @property
    def D(self) -> int:
        return self.trap.D

    @property
    def q(self) -> float:
        return self.trap.q

    @property
    def units(self) -> UnitSystem:
        return UnitSystem.for_trap(self.trap, self.species)

    @property
    def a(self) -> float:
        """Scattering length in units of rho0."""
        return self.species.scattering_length / self.units.length

    @property
    def a_tilde(self) -> float:
        """a (N - 1) in units of rho0."""
        return self.a * (self.atom_number - 1)

    @property
    def g(self) -> float:
        """Single-pair coupling 4 pi a (internal units)."""
        return 4 * pi * self.a

    @property
    def g_tilde(self) -> float:
        """Mean-field coupling (N - 1) g (internal units)."""
        return self.g * (self.atom_number - 1)

    @property
    def k(self) -> float:
        """Longitudinal stiffness in hbar*omega_T / rho0^q."""
        units = self.units
        return self.trap.stiffness(self.species) * units.length ** self.q / units.energy

    @property
    def omega_L(self) -> float:
        """Longitudinal frequency in units of omega_T (harmonic traps)."""
        return math.sqrt(self.k)

    @property
    def r0(self) -> float:
        """Longitudinal oscillator length in units of rho0."""
        return self.k ** (-1.0 / (2.0 + self.q))

    @property
    def E0(self) -> float:
        """Bare transverse ground-state energy, D/2 in units of hbar*omega_T."""
        return self.D / 2.0

    @property
    def eta_T(self) -> float:
        """Inverse transverse area of the bare Gaussian, (2 pi)^(-D/2)."""
        return (2 * pi) ** (-self.D / 2.0)
