"""Tests for the configuration system."""

import json
import shutil

import pytest

import schmidtbec.core.config
from schmidtbec.core.config import (
    HASHED_SECTIONS,
    ConfigError,
    ConfigSection,
    ConfigurationManager,
    MemoryBudgetError,
    MethodsConfig,
    NumericsConfig,
    RunConfig,
    SweepConfig,
    TrapConfig,
)


class TestConfigurationManager:
    """Test the ConfigurationManager class."""

    def test_init_creates_directory(self, temp_config_dir):
        """Test that loading creates the config directory."""
        shutil.rmtree(temp_config_dir)
        assert not temp_config_dir.exists()

        manager = ConfigurationManager(temp_config_dir)
        manager.load_all()

        assert temp_config_dir.exists()

    def test_load_creates_default_configs(self, config_manager):
        """Test that loading creates default config files."""
        config_manager.load_all()

        for section in ConfigSection:
            config_file = config_manager.config_dir / f"{section.value}.json"
            assert config_file.exists()

    def test_load_section_returns_correct_type(self, config_manager):
        trap = config_manager.load_section(ConfigSection.TRAP)
        assert isinstance(trap, TrapConfig)

        numerics = config_manager.load_section(ConfigSection.NUMERICS)
        assert isinstance(numerics, NumericsConfig)

    def test_get_section(self, config_manager):
        config_manager.load_all()

        trap = config_manager.get(ConfigSection.TRAP)
        assert trap.omega_T_hz == 350.0
        assert trap.d == 1

    def test_get_unloaded_section_raises_error(self, config_manager):
        with pytest.raises(ConfigError):
            config_manager.get(ConfigSection.TRAP)

    def test_save_and_reload(self, config_manager):
        """Test saving and reloading configuration."""
        config_manager.load_all()

        trap = config_manager.get(ConfigSection.TRAP)
        trap.omega_T_hz = 700.0
        trap.d = 2
        config_manager.save_all()

        new_manager = ConfigurationManager(config_manager.config_dir)
        new_manager.load_all()

        loaded = new_manager.get(ConfigSection.TRAP)
        assert loaded.omega_T_hz == 700.0
        assert loaded.d == 2

    def test_override_system(self, config_manager):
        """Test configuration override system."""
        config_manager.load_all()

        overrides = {
            "trap": {"omega_T_hz": 175.0},
            "methods": {"enabled": ["variational"]},
        }
        with open(config_manager.config_dir / "overrides.json", "w") as f:
            json.dump(overrides, f)

        config_manager.reload()

        assert config_manager.get(ConfigSection.TRAP).omega_T_hz == 175.0
        assert config_manager.get(ConfigSection.METHODS).enabled == ["variational"]

    def test_invalid_json_uses_defaults(self, config_manager):
        """Lenient mode falls back to defaults on a broken file."""
        with open(config_manager.config_dir / "trap.json", "w") as f:
            f.write("{ invalid json }")

        trap = config_manager.load_section(ConfigSection.TRAP)
        assert trap == TrapConfig()

    def test_invalid_json_strict_reports_location(self, temp_config_dir):
        path = temp_config_dir / "trap.json"
        path.write_text('{\n  "d": 1,\n  "q" 2.0\n}\n')

        manager = ConfigurationManager(temp_config_dir, strict=True)
        with pytest.raises(ConfigError) as info:
            manager.load_section(ConfigSection.TRAP)

        err = info.value
        assert err.source == str(path)
        assert err.line == 3
        assert err.column is not None
        assert str(err).startswith(f"{path}:3:")

    def test_unknown_field_strict_names_field(self, temp_config_dir):
        (temp_config_dir / "trap.json").write_text(json.dumps({"omega_T": 350.0}))

        manager = ConfigurationManager(temp_config_dir, strict=True)
        with pytest.raises(ConfigError) as info:
            manager.load_section(ConfigSection.TRAP)
        assert info.value.field_path == "trap.omega_T"

    def test_partial_config_fills_defaults(self, config_manager):
        """Test that partial configs are filled with defaults."""
        with open(config_manager.config_dir / "trap.json", "w") as f:
            json.dump({"omega_T_hz": 700.0}, f)

        trap = config_manager.load_section(ConfigSection.TRAP)
        assert trap.omega_T_hz == 700.0
        assert trap.omega_L_hz == 3.5

    def test_create_default_configs(self, config_manager):
        config_manager.create_default_configs()

        for section in ConfigSection:
            config_file = config_manager.config_dir / f"{section.value}.json"
            with open(config_file) as f:
                assert isinstance(json.load(f), dict)

    def test_run_file_is_layered_last(self, config_manager, tmp_path):
        config_manager.load_all()
        run_file = tmp_path / "run.json"
        run_file.write_text(json.dumps({"trap": {"d": 2}, "output": {"workers": 3}}))

        config_manager.load_run_file(run_file)
        run = config_manager.run_config()

        assert run.trap.d == 2
        assert run.output.workers == 3
        assert config_manager.strict is False

    def test_run_file_rejects_unknown_section(self, config_manager, tmp_path):
        config_manager.load_all()
        run_file = tmp_path / "run.json"
        run_file.write_text(json.dumps({"traps": {"d": 2}}))

        with pytest.raises(ConfigError) as info:
            config_manager.load_run_file(run_file)
        assert info.value.field_path == "traps"

    def test_missing_run_file(self, config_manager, tmp_path):
        with pytest.raises(ConfigError, match="file not found"):
            config_manager.load_run_file(tmp_path / "absent.json")


class TestRunConfig:
    """Validation and hashing of a resolved configuration."""

    def test_defaults_validate(self):
        RunConfig().validate()

    @pytest.mark.parametrize("section, field, value, path", [
        ("trap", "d", 3, "trap.d"),
        ("trap", "q", 0.0, "trap.q"),
        ("trap", "omega_L_hz", 400.0, "trap.omega_L_hz"),
        ("methods", "enabled", ["spline"], "methods.enabled"),
        ("methods", "enabled", [], "methods.enabled"),
        ("numerics", "dt", 0.0, "numerics.dt"),
        ("numerics", "initial_state", "random", "numerics.initial_state"),
        ("grid", "points", [64, 64, 500], "grid.points"),
        ("output", "workers", 0, "output.workers"),
        ("sweep", "atom_numbers", [0.5], "sweep.atom_numbers"),
    ])
    def test_invalid_values_name_their_field(self, section, field, value, path):
        run = RunConfig()
        setattr(getattr(run, section), field, value)

        with pytest.raises(ConfigError) as info:
            run.validate()
        assert info.value.field_path == path

    def test_equal_frequencies_allowed(self):
        run = RunConfig()
        run.trap.omega_L_hz = run.trap.omega_T_hz
        run.validate()

    def test_hash_is_stable_and_hex(self):
        assert RunConfig().config_hash() == RunConfig().config_hash()
        assert len(RunConfig().config_hash()) == 64
        int(RunConfig().config_hash(), 16)

    def test_hash_ignores_output_and_logging(self):
        base = RunConfig()
        other = RunConfig()
        other.output.workers = 8
        other.output.out = "elsewhere.csv"
        other.logging.level = "DEBUG"
        assert base.config_hash() == other.config_hash()

    def test_hash_ignores_speed_and_method_order(self):
        other = RunConfig()
        other.numerics.fft_workers = 4
        other.numerics.energy_every = 7
        other.methods.enabled = list(reversed(other.methods.enabled))
        assert other.config_hash() == RunConfig().config_hash()

    @pytest.mark.parametrize("section", [s.value for s in HASHED_SECTIONS])
    def test_hash_tracks_physics_sections(self, section):
        changed = RunConfig()
        obj = getattr(changed, section)
        if section == "species":
            obj.name = "K39"
        elif section == "trap":
            obj.omega_T_hz = 351.0
        elif section == "sweep":
            obj.n_points = 31
        elif section == "methods":
            obj.n_max = 61
        elif section == "grid":
            obj.points = [32, 32, 256]
        else:
            obj.dt = 2e-3
        assert changed.config_hash() != RunConfig().config_hash()


class TestValueTypes:
    """Values must match the type of the field they set."""

    BAD_VALUES = [
        ("species", "mass_u", "heavy"),
        ("trap", "omega_T_hz", "350"),
        ("sweep", "n_points", 2.5),
        ("methods", "enabled", "variational"),
        ("grid", "points", [32, "32", 256]),
        ("numerics", "dt", "fast"),
        ("output", "workers", True),
        ("logging", "to_file", "yes"),
    ]

    @pytest.mark.parametrize("section, field, value", BAD_VALUES)
    def test_section_file_names_field(self, temp_config_dir, section, field, value):
        (temp_config_dir / f"{section}.json").write_text(json.dumps({field: value}))

        manager = ConfigurationManager(temp_config_dir, strict=True)
        with pytest.raises(ConfigError) as info:
            manager.load_section(ConfigSection(section))
        assert info.value.field_path == f"{section}.{field}"

    @pytest.mark.parametrize("section, field, value", BAD_VALUES)
    def test_run_file_names_field(self, config_manager, tmp_path, section, field, value):
        config_manager.load_all()
        run_file = tmp_path / "run.json"
        run_file.write_text(json.dumps({section: {field: value}}))

        with pytest.raises(ConfigError) as info:
            config_manager.load_run_file(run_file)
        assert info.value.field_path == f"{section}.{field}"
        assert str(run_file) in str(info.value)

    def test_lenient_override_keeps_previous_value(self, config_manager):
        config_manager.load_all()
        config_manager.apply_overrides({"numerics": {"dt": "fast", "tol": 1e-8}})

        numerics = config_manager.get(ConfigSection.NUMERICS)
        assert numerics.dt == NumericsConfig().dt
        assert numerics.tol == 1e-8

    def test_integers_widen_to_float(self, config_manager):
        (config_manager.config_dir / "trap.json").write_text(json.dumps({"omega_T_hz": 350}))
        (config_manager.config_dir / "sweep.json").write_text(
            json.dumps({"atom_numbers": [1000, 3000]}))

        trap = config_manager.load_section(ConfigSection.TRAP)
        sweep = config_manager.load_section(ConfigSection.SWEEP)
        assert isinstance(trap.omega_T_hz, float)
        assert all(isinstance(n, float) for n in sweep.atom_numbers)

    def test_integral_float_accepted_for_integer_field(self, config_manager):
        (config_manager.config_dir / "numerics.json").write_text(
            json.dumps({"max_iters": 1e5, "fixed_iterations": None}))

        numerics = config_manager.load_section(ConfigSection.NUMERICS)
        assert numerics.max_iters == 100000
        assert isinstance(numerics.max_iters, int)
        assert numerics.fixed_iterations is None


class TestConfigClasses:
    """Test individual configuration classes."""

    def test_sweep_defaults(self):
        config = SweepConfig()
        assert config.atom_numbers is None
        assert config.n_points == 30
        assert config.relative_to_NT is False

    def test_methods_defaults(self):
        config = MethodsConfig()
        assert "solver-3d" not in config.enabled
        assert config.n_max == 60

    def test_memory_budget_error_is_config_error(self):
        err = MemoryBudgetError("too big", field_path="output.mem_cap_gib")
        assert isinstance(err, ConfigError)
        assert "[output.mem_cap_gib]" in str(err)


class TestGlobalFunctions:
    """Test global configuration functions."""

    @pytest.fixture(autouse=True)
    def isolated_manager(self, monkeypatch, temp_config_dir):
        monkeypatch.setenv("SCHMIDTBEC_CONFIG_DIR", str(temp_config_dir))
        monkeypatch.setattr(schmidtbec.core.config, "_config_manager", None)

    def test_get_config_manager_singleton(self, temp_config_dir):
        from schmidtbec.core.config import get_config_manager

        manager1 = get_config_manager()
        manager2 = get_config_manager()
        assert manager1 is manager2
        assert manager1.config_dir == temp_config_dir

    def test_get_config_convenience(self):
        from schmidtbec.core.config import get_config

        assert isinstance(get_config(ConfigSection.TRAP), TrapConfig)
