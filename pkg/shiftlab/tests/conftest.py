"""
Pytest configuration and fixtures.
"""

import random
from pathlib import Path

import pytest

from shiftlab.config.settings import ConfigManager, Configuration, WorkbenchSettings
from shiftlab.core.factory import WorkbenchFactory
from shiftlab.dynamics.noninv import ConstructionSchedule, NonInvertibleSystem
from shiftlab.services.system_service import SystemService

SPEC_DIR = Path(__file__).resolve().parents[2] / "config" / "specs"
SPEC_NAMES = ("golden", "full2", "fib", "period3", "noninv", "product", "tiny")


@pytest.fixture
def spec_dir():
    """Directory holding the bundled .shift fixtures."""
    return SPEC_DIR


@pytest.fixture
def temp_config_file(tmp_path):
    """Create a temporary config file whose spec library points at the bundled fixtures."""
    config_path = tmp_path / "workbench.json"
    config = Configuration(
        settings=WorkbenchSettings(log_dir=str(tmp_path / "logs")),
        spec_library={name: str(SPEC_DIR / f"{name}.shift") for name in SPEC_NAMES},
    )
    config.save_to_file(str(config_path))
    return str(config_path)


@pytest.fixture
def config_manager(temp_config_file):
    """Create a ConfigManager instance for testing."""
    return ConfigManager(temp_config_file, environ={})


@pytest.fixture
def settings():
    return WorkbenchSettings()


@pytest.fixture
def system_service(settings):
    return SystemService(settings)


@pytest.fixture
def workbench_factory(temp_config_file, tmp_path):
    """Create a WorkbenchFactory writing logs below tmp_path."""
    factory = WorkbenchFactory(temp_config_file, log_dir=str(tmp_path / "logs"), console=False)
    yield factory
    factory.reset_services()


@pytest.fixture
def rng():
    """Seeded generator; property suites never touch the global RNG."""
    return random.Random(20240601)


@pytest.fixture
def tiny_system():
    """dmax=2, M_0=4: L_0=2, L_1=36, L_2=7560, all materialized."""
    return NonInvertibleSystem(ConstructionSchedule(d_max=2, multiplicity=(4,), stages=2))


@pytest.fixture(scope="session")
def default_system():
    """The default scaled schedule: L_1=13056 materialized, x_2 laid out lazily."""
    return NonInvertibleSystem(ConstructionSchedule())
