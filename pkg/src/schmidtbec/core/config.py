"""Configuration management for schmidtbec.

Settings live in one JSON file per section under ``config/``; an optional
``overrides.json`` and a single-file run configuration (``--config``) are
layered on top, in that order.
"""

import hashlib
import json
import logging
import os
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union, get_args, get_origin, get_type_hints

from dotenv import find_dotenv, load_dotenv

from .errors import SchmidtBecError


class ConfigError(SchmidtBecError):
    """Raised when there's an error in configuration loading or validation."""

    def __init__(self, message: str, source: Optional[str] = None,
                 line: Optional[int] = None, column: Optional[int] = None,
                 field_path: Optional[str] = None):
        location = ""
        if source:
            location = str(source)
            if line is not None:
                location += f":{line}"
                if column is not None:
                    location += f":{column}"
        if field_path:
            location = f"{location} [{field_path}]" if location else f"[{field_path}]"
        super().__init__(f"{location}: {message}" if location else message)
        self.source = source
        self.line = line
        self.column = column
        self.field_path = field_path


class MemoryBudgetError(ConfigError):
    """Raised when a requested solver grid would exceed the memory cap."""
    pass


class ConfigSection(Enum):
    """Configuration sections available in the system."""
    SPECIES = "species"
    TRAP = "trap"
    SWEEP = "sweep"
    METHODS = "methods"
    GRID = "grid"
    NUMERICS = "numerics"
    OUTPUT = "output"
    LOGGING = "logging"


# Sections that define the physics of a run; the others only say where and
# how fast results are produced.
HASHED_SECTIONS = (
    ConfigSection.SPECIES,
    ConfigSection.TRAP,
    ConfigSection.SWEEP,
    ConfigSection.METHODS,
    ConfigSection.GRID,
    ConfigSection.NUMERICS,
)
# Numerics fields that change speed or diagnostics but never results.
UNHASHED_NUMERICS = ("fft_workers", "energy_every")

KNOWN_METHODS = ("formula-exact-RL", "formula-first-order", "solver-3d", "variational")


@dataclass
class SpeciesConfig:
    """Atomic species: a registry name, or an explicit mass and scattering length."""
    name: Optional[str] = "Rb87"
    mass_u: Optional[float] = None
    scattering_length_a0: Optional[float] = None


@dataclass
class TrapConfig:
    """Trap geometry; frequencies are cyclic (Hz)."""
    omega_T_hz: float = 350.0
    omega_L_hz: float = 3.5
    d: int = 1
    q: float = 2.0
    # SI stiffness [J/m^q]; derived from omega_L_hz when null
    k: Optional[float] = None


@dataclass
class SweepConfig:
    """Atom numbers to evaluate.

    An explicit ``atom_numbers`` list wins; otherwise ``n_points`` log-spaced
    values between ``n_min`` and ``n_max`` (defaults max(2, 0.01 N_T) and N_T).
    With ``relative_to_NT`` every value is read in units of N_T.
    """
    atom_numbers: Optional[List[float]] = None
    n_points: int = 30
    n_min: Optional[float] = None
    n_max: Optional[float] = None
    relative_to_NT: bool = False


@dataclass
class MethodsConfig:
    """Which estimators a sweep runs, plus their truncation settings."""
    enabled: List[str] = field(default_factory=lambda: [
        "formula-first-order", "formula-exact-RL", "variational"
    ])
    n_max: int = 60
    quadrature_points: int = 400


@dataclass
class GridConfig:
    """Solver grid overrides; lengths in units of the transverse oscillator length."""
    points: Optional[List[int]] = None
    transverse_half_width: Optional[float] = None
    longitudinal_half_width: Optional[float] = None


@dataclass
class NumericsConfig:
    """Imaginary-time relaxation settings (internal units)."""
    dt: float = 1e-3
    tol: float = 1e-10
    max_iters: int = 200_000
    initial_state: str = "gaussian"  # gaussian, analytic
    fixed_iterations: Optional[int] = None
    energy_every: int = 100
    fft_workers: int = 1


@dataclass
class OutputConfig:
    """Where results go and how many processes produce them."""
    out: str = "results/sweep.csv"
    workers: int = 1
    mem_cap_gib: float = 4.0


@dataclass
class LoggingSectionConfig:
    """Logging options consumed by ``LoggingConfig.setup_logging``."""
    level: str = "INFO"
    to_file: bool = False
    log_dir: str = "logs"
    detailed: bool = False


SECTION_CLASSES: Dict[ConfigSection, type] = {
    ConfigSection.SPECIES: SpeciesConfig,
    ConfigSection.TRAP: TrapConfig,
    ConfigSection.SWEEP: SweepConfig,
    ConfigSection.METHODS: MethodsConfig,
    ConfigSection.GRID: GridConfig,
    ConfigSection.NUMERICS: NumericsConfig,
    ConfigSection.OUTPUT: OutputConfig,
    ConfigSection.LOGGING: LoggingSectionConfig,
}


@dataclass
class RunConfig:
    """Fully resolved configuration of one command-line run."""
    species: SpeciesConfig = field(default_factory=SpeciesConfig)
    trap: TrapConfig = field(default_factory=TrapConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    methods: MethodsConfig = field(default_factory=MethodsConfig)
    grid: GridConfig = field(default_factory=GridConfig)
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    logging: LoggingSectionConfig = field(default_factory=LoggingSectionConfig)

    def section(self, section: ConfigSection) -> Any:
        return getattr(self, section.value)

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON of the physics-defining sections."""
        payload = {s.value: asdict(self.section(s)) for s in HASHED_SECTIONS}
        for name in UNHASHED_NUMERICS:
            del payload[ConfigSection.NUMERICS.value][name]
        methods = payload[ConfigSection.METHODS.value]
        methods["enabled"] = sorted(methods["enabled"])
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def validate(self) -> None:
        """Check cross-field constraints.

        Raises:
            ConfigError: naming the offending ``section.field``.
        """
        trap = self.trap
        if trap.d not in (1, 2):
            raise ConfigError("must be 1 or 2", field_path="trap.d")
        if trap.q <= 0:
            raise ConfigError("must be positive", field_path="trap.q")
        if not trap.omega_T_hz > 0 or not trap.omega_L_hz > 0:
            raise ConfigError("frequencies must be positive", field_path="trap.omega_T_hz")
        if trap.omega_L_hz > trap.omega_T_hz:
            raise ConfigError("omega_L_hz must not exceed omega_T_hz",
                              field_path="trap.omega_L_hz")

        species = self.species
        if species.name is None and (species.mass_u is None
                                     or species.scattering_length_a0 is None):
            raise ConfigError("give a species name or both mass_u and scattering_length_a0",
                              field_path="species")

        sweep = self.sweep
        if sweep.atom_numbers is not None:
            if not sweep.atom_numbers:
                raise ConfigError("must not be empty", field_path="sweep.atom_numbers")
            if not sweep.relative_to_NT and min(sweep.atom_numbers) < 1:
                raise ConfigError("atom numbers must be >= 1",
                                  field_path="sweep.atom_numbers")
            if sweep.relative_to_NT and min(sweep.atom_numbers) <= 0:
                raise ConfigError("relative atom numbers must be positive",
                                  field_path="sweep.atom_numbers")
        elif sweep.n_points < 1:
            raise ConfigError("must be at least 1", field_path="sweep.n_points")

        if not self.methods.enabled:
            raise ConfigError("at least one method is required", field_path="methods.enabled")
        unknown = sorted(set(self.methods.enabled) - set(KNOWN_METHODS))
        if unknown:
            raise ConfigError(f"unknown method(s) {unknown}; known: {list(KNOWN_METHODS)}",
                              field_path="methods.enabled")
        if self.methods.n_max < 4:
            raise ConfigError("must be at least 4", field_path="methods.n_max")

        numerics = self.numerics
        if numerics.dt <= 0:
            raise ConfigError("must be positive", field_path="numerics.dt")
        if numerics.initial_state not in ("gaussian", "analytic"):
            raise ConfigError("must be 'gaussian' or 'analytic'",
                              field_path="numerics.initial_state")
        if self.grid.points is not None:
            if len(self.grid.points) != 3:
                raise ConfigError("needs three entries", field_path="grid.points")
            for n in self.grid.points:
                if n < 2 or n & (n - 1):
                    raise ConfigError(f"{n} is not a power of two", field_path="grid.points")
        if self.output.workers < 1:
            raise ConfigError("must be at least 1", field_path="output.workers")
        if self.output.mem_cap_gib <= 0:
            raise ConfigError("must be positive", field_path="output.mem_cap_gib")


def _find_default_config_dir() -> Path:
    env_dir = os.environ.get("SCHMIDTBEC_CONFIG_DIR")
    if env_dir:
        return Path(env_dir)
    # Find project root (where pyproject.toml is)
    current = Path(__file__).parent
    while current.parent != current:
        if (current / "pyproject.toml").exists():
            return current / "config"
        current = current.parent
    return Path.cwd() / "config"


class ConfigurationManager:
    """Manages loading and access to all configuration."""

    def __init__(self, config_dir: Optional[Union[str, Path]] = None, strict: bool = False):
        """Initialize the configuration manager.

        Args:
            config_dir: Directory containing configuration files.
                       Defaults to $SCHMIDTBEC_CONFIG_DIR or 'config' in project root.
            strict: Raise ConfigError on bad files instead of falling back to
                    defaults with a warning.
        """
        self.config_dir = Path(config_dir) if config_dir is not None else _find_default_config_dir()
        self.strict = strict
        self.configs: Dict[ConfigSection, Any] = {}
        self._config_classes = SECTION_CLASSES
        self.logger = logging.getLogger(__name__)

    def load_all(self) -> None:
        """Load all configuration files, then overrides.json."""
        self.config_dir.mkdir(parents=True, exist_ok=True)

        for section in ConfigSection:
            self.load_section(section)

        self._load_overrides()

    def load_section(self, section: ConfigSection) -> Any:
        """Load a specific configuration section.

        Args:
            section: The configuration section to load.

        Returns:
            The loaded configuration object.
        """
        config_file = self.config_dir / f"{section.value}.json"
        config_class = self._config_classes[section]

        if config_file.exists():
            try:
                data = _read_json(config_file)
                if not isinstance(data, dict):
                    raise ConfigError("expected a JSON object", source=str(config_file))
                config_obj = _build_section(section, data, str(config_file))
            except ConfigError as e:
                if self.strict:
                    raise
                self.logger.warning(f"Error loading {config_file}: {e}")
                self.logger.info(f"Using default configuration for {section.value}")
                config_obj = config_class()
        else:
            config_obj = config_class()
            self._save_section(section, config_obj)
            self.logger.info(f"Created default configuration file: {config_file}")

        self.configs[section] = config_obj
        return config_obj

    def _save_section(self, section: ConfigSection, config_obj: Any) -> None:
        """Save a configuration section to file.

        Args:
            section: The configuration section.
            config_obj: The configuration object to save.
        """
        config_file = self.config_dir / f"{section.value}.json"
        data = asdict(config_obj)
        with open(config_file, 'w') as f:
            json.dump(data, f, indent=2)
            f.write("\n")

    def _load_overrides(self) -> None:
        """Load configuration overrides from overrides.json."""
        override_file = self.config_dir / "overrides.json"
        if not override_file.exists():
            return
        try:
            self.apply_overrides(_read_json(override_file), str(override_file))
        except ConfigError as e:
            if self.strict:
                raise
            self.logger.error(f"Error loading overrides: {e}")

    def apply_overrides(self, overrides: Any, source: str = "<overrides>") -> None:
        """Apply a ``{section: {field: value}}`` mapping on top of loaded sections.

        Args:
            overrides: Mapping keyed by section name.
            source: Name used in diagnostics.

        Raises:
            ConfigError: In strict mode, for unknown sections or fields.
        """
        if not isinstance(overrides, dict):
            raise ConfigError("expected a JSON object keyed by section", source=source)

        for section_name, section_overrides in overrides.items():
            try:
                section = ConfigSection(section_name)
            except ValueError:
                if self.strict:
                    raise ConfigError("unknown section", source=source,
                                      field_path=section_name) from None
                self.logger.warning(f"Unknown section in overrides: {section_name}")
                continue
            if not isinstance(section_overrides, dict):
                raise ConfigError("expected a JSON object", source=source,
                                  field_path=section_name)

            config_obj = self.configs.get(section) or self._config_classes[section]()
            known = {f.name for f in fields(config_obj)}
            hints = get_type_hints(type(config_obj))
            for key, value in section_overrides.items():
                if key not in known:
                    if self.strict:
                        raise ConfigError("unknown field", source=source,
                                          field_path=f"{section_name}.{key}")
                    self.logger.warning(f"Ignoring unknown override {section_name}.{key}")
                    continue
                try:
                    value = _coerce(hints[key], value, f"{section_name}.{key}", source)
                except ConfigError as e:
                    if self.strict:
                        raise
                    self.logger.warning(f"Ignoring invalid override: {e}")
                    continue
                setattr(config_obj, key, value)
                self.logger.debug(f"Applied override: {section_name}.{key} = {value}")
            self.configs[section] = config_obj

    def load_run_file(self, path: Union[str, Path]) -> None:
        """Layer a single-file run configuration over the loaded sections.

        Raises:
            ConfigError: If the file is missing, malformed, or names unknown keys.
        """
        path = Path(path)
        if not path.exists():
            raise ConfigError("file not found", source=str(path))
        previous = self.strict
        self.strict = True
        try:
            self.apply_overrides(_read_json(path), str(path))
        finally:
            self.strict = previous
        self.logger.info(f"Applied run configuration {path}")

    def get(self, section: ConfigSection) -> Any:
        """Get a configuration section.

        Args:
            section: The configuration section to retrieve.

        Returns:
            The configuration object for the section.

        Raises:
            ConfigError: If the section hasn't been loaded.
        """
        if section not in self.configs:
            raise ConfigError(f"Configuration section {section.value} not loaded")
        return self.configs[section]

    def run_config(self) -> RunConfig:
        """Assemble the loaded sections into a RunConfig."""
        return RunConfig(**{s.value: self.get(s) for s in ConfigSection})

    def reload(self) -> None:
        """Reload all configuration files."""
        self.logger.info("Reloading configuration...")
        self.configs.clear()
        self.load_all()

    def save_all(self) -> None:
        """Save all current configurations to files."""
        for section, config_obj in self.configs.items():
            self._save_section(section, config_obj)
        self.logger.info("Saved all configurations")

    def create_default_configs(self) -> None:
        """Create all default configuration files."""
        self.config_dir.mkdir(parents=True, exist_ok=True)
        for section, config_class in self._config_classes.items():
            config_file = self.config_dir / f"{section.value}.json"
            if not config_file.exists():
                self._save_section(section, config_class())
                self.logger.info(f"Created default config: {config_file}")


def _read_json(path: Path) -> Any:
    try:
        with open(path, 'r') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError(e.msg, source=str(path), line=e.lineno, column=e.colno) from e
    except OSError as e:
        raise ConfigError(str(e), source=str(path)) from e


def _build_section(section: ConfigSection, data: Dict[str, Any], source: str) -> Any:
    config_class = SECTION_CLASSES[section]
    known = {f.name for f in fields(config_class)}
    for key in data:
        if key not in known:
            raise ConfigError("unknown field", source=source,
                              field_path=f"{section.value}.{key}")
    hints = get_type_hints(config_class)
    values = {key: _coerce(hints[key], value, f"{section.value}.{key}", source)
              for key, value in data.items()}
    return config_class(**values)


def _coerce(expected: Any, value: Any, path: str, source: Optional[str]) -> Any:
    """Check ``value`` against a field annotation; integers widen to float.

    Raises:
        ConfigError: Naming ``path`` when the value has the wrong type.
    """
    def mismatch(kind: str) -> ConfigError:
        return ConfigError(f"expected {kind}, got {value!r}", source=source, field_path=path)

    if get_origin(expected) is Union:
        if value is None:
            return None
        inner = next(t for t in get_args(expected) if t is not type(None))
        return _coerce(inner, value, path, source)
    if get_origin(expected) is list:
        if not isinstance(value, list):
            raise mismatch("a list")
        (item,) = get_args(expected)
        return [_coerce(item, v, path, source) for v in value]
    # bool is an int subclass; keep it out of the numeric fields
    if expected is bool:
        if not isinstance(value, bool):
            raise mismatch("true or false")
        return value
    if expected is int:
        if isinstance(value, float) and value.is_integer():
            return int(value)
        if isinstance(value, bool) or not isinstance(value, int):
            raise mismatch("an integer")
        return value
    if expected is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise mismatch("a number")
        return float(value)
    if expected is str and not isinstance(value, str):
        raise mismatch("a string")
    return value


# Global configuration instance
_config_manager: Optional[ConfigurationManager] = None


def get_config_manager() -> ConfigurationManager:
    """Get the global configuration manager instance.

    Returns:
        The configuration manager.
    """
    global _config_manager
    if _config_manager is None:
        load_dotenv(find_dotenv(usecwd=True))
        _config_manager = ConfigurationManager()
        _config_manager.load_all()
    return _config_manager


def get_config(section: ConfigSection) -> Any:
    """Convenience function to get a configuration section.

    Args:
        section: The configuration section to retrieve.

    Returns:
        The configuration object for the section.
    """
    return get_config_manager().get(section)
