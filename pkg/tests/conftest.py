"""Pytest configuration and shared fixtures."""

import sys
from pathlib import Path
from typing import Callable, Generator

import pytest

# Add src to Python path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from schmidtbec.core.config import ConfigurationManager, RunConfig  # noqa: E402
from schmidtbec.core.logging_config import LoggingConfig  # noqa: E402
from schmidtbec.physics.units import ProblemSpec  # noqa: E402


@pytest.fixture
def make_spec() -> Callable[..., ProblemSpec]:
    """Factory for Rb87 problems: make_spec(omega_T_hz, d, N)."""
    def factory(omega_T_hz: float = 350.0, d: int = 1, N: float = 1000.0,
                omega_L_hz: float = 3.5) -> ProblemSpec:
        return ProblemSpec.reference_trap(omega_T_hz, d, N, omega_L_hz)
    return factory


@pytest.fixture
def quasi1d_spec() -> ProblemSpec:
    """Cigar at 350 Hz / 3.5 Hz, N = 5000."""
    return ProblemSpec.reference_trap(350.0, 1, 5000.0)


@pytest.fixture
def quasi2d_spec() -> ProblemSpec:
    """Pancake at 350 Hz / 3.5 Hz, N = 5000."""
    return ProblemSpec.reference_trap(350.0, 2, 5000.0)


@pytest.fixture(params=[1, 2], ids=["quasi1d", "quasi2d"])
def d(request) -> int:
    return request.param


@pytest.fixture
def temp_config_dir(tmp_path) -> Path:
    """Empty configuration directory."""
    config_dir = tmp_path / "config"
    config_dir.mkdir()
    return config_dir


@pytest.fixture
def config_manager(temp_config_dir) -> ConfigurationManager:
    return ConfigurationManager(temp_config_dir)


@pytest.fixture
def run_config() -> RunConfig:
    """Small formula-only run: five atom numbers at 350 Hz."""
    run = RunConfig()
    run.sweep.atom_numbers = [100.0, 300.0, 1000.0, 3000.0, 10000.0]
    return run


@pytest.fixture(autouse=True)
def reset_logging() -> Generator[None, None, None]:
    """Let every test configure logging from scratch."""
    yield
    if LoggingConfig._initialized:
        LoggingConfig.reset()


# Markers for test organization
def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line(
        "markers", "unit: Unit tests that test single components"
    )
    config.addinivalue_line(
        "markers", "integration: Integration tests that test multiple components"
    )
    config.addinivalue_line(
        "markers", "slow: Slow tests that should be run separately"
    )
    config.addinivalue_line(
        "markers", "benchmark: Performance benchmark tests"
    )
