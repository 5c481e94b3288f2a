"""
Configuration management with validation for the shiftlab workbench.
"""

import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from ..core.exceptions import ConfigurationError

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")
REPORT_FORMATS = ("csv", "json")

# Budget caps that may be overridden from the environment.
ENV_OVERRIDES = {
    "SHIFTLAB_ENUMERATION_CAP": "enumeration_cap",
    "SHIFTLAB_EXACT_CAP": "exact_cap",
    "SHIFTLAB_STREAM_BUDGET": "stream_budget",
    "SHIFTLAB_STAGE_MEMORY": "stage_memory_bytes",
    "SHIFTLAB_SEARCH_BUDGET": "search_budget",
    "SHIFTLAB_MARKER_BUDGET": "marker_budget",
}


@dataclass
class WorkbenchSettings:
    """Budgets, tolerances and logging settings for the workbench."""
    log_level: str = "INFO"
    log_dir: str = "logs"
    enumeration_cap: int = 2 ** 22
    exact_cap: int = 65536
    float_tolerance: float = 1e-9
    test_horizon: int = 20
    stream_budget: int = 10 ** 7
    stage_memory_bytes: int = 2 * 1024 ** 3
    search_budget: int = 12
    marker_budget: int = 65536
    power_iteration_cap: int = 100000
    default_format: str = "csv"

    def __post_init__(self) -> None:
        """Validate settings."""
        if self.log_level.upper() not in LOG_LEVELS:
            raise ConfigurationError("Invalid log level")
        self.log_level = self.log_level.upper()

        positive = ("enumeration_cap", "exact_cap", "test_horizon", "stream_budget",
                    "stage_memory_bytes", "search_budget", "marker_budget", "power_iteration_cap")
        for name in positive:
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value <= 0:
                raise ConfigurationError(f"{name} must be a positive integer")

        if not 0 < self.float_tolerance < 1:
            raise ConfigurationError("float_tolerance must lie in (0, 1)")

        if self.default_format not in REPORT_FORMATS:
            raise ConfigurationError(f"default_format must be one of {', '.join(REPORT_FORMATS)}")


@dataclass
class Configuration:
    """Main configuration class."""
    settings: WorkbenchSettings = field(default_factory=WorkbenchSettings)
    spec_library: Dict[str, str] = field(default_factory=dict)

    @classmethod
    def from_file(cls, config_path: str) -> 'Configuration':
        """Load configuration from JSON file."""
        config_file = Path(config_path)

        if not config_file.exists():
            raise ConfigurationError(f"Configuration file not found: {config_path}")

        try:
            with config_file.open('r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigurationError(f"Invalid JSON in config file: {e}")
        except OSError as e:
            raise ConfigurationError(f"Error reading config file: {e}")

        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'Configuration':
        """Create configuration from dictionary."""
        try:
            settings = WorkbenchSettings(**data.get('settings', {}))
            library = {str(k): str(v) for k, v in data.get('spec_library', {}).items()}
            return cls(settings=settings, spec_library=library)
        except TypeError as e:
            raise ConfigurationError(f"Invalid configuration format: {e}")

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            'settings': asdict(self.settings),
            'spec_library': dict(sorted(self.spec_library.items())),
        }

    def save_to_file(self, config_path: str) -> None:
        """Save configuration to JSON file."""
        try:
            config_file = Path(config_path)
            config_file.parent.mkdir(parents=True, exist_ok=True)

            with config_file.open('w', encoding='utf-8') as f:
                json.dump(self.to_dict(), f, indent=2, ensure_ascii=False)
        except OSError as e:
            raise ConfigurationError(f"Error saving config file: {e}")

    def apply_environment(self, environ: Optional[Mapping[str, str]] = None) -> None:
        """Apply SHIFTLAB_* budget overrides."""
        environ = os.environ if environ is None else environ
        for variable, attribute in ENV_OVERRIDES.items():
            raw = environ.get(variable)
            if raw is None:
                continue
            try:
                value = int(raw)
            except ValueError:
                raise ConfigurationError(f"{variable} must be an integer, got {raw!r}")
            setattr(self.settings, attribute, value)
        self.validate()

    def validate(self) -> None:
        """Validate the entire configuration."""
        self.settings.__post_init__()

        for name, path in self.spec_library.items():
            if not path.endswith(".shift"):
                raise ConfigurationError(f"Spec library entry '{name}' must point to a .shift file")


class ConfigManager:
    """Manages configuration loading, validation, and saving."""

    def __init__(self, config_path: str = "config/workbench.json",
                 environ: Optional[Mapping[str, str]] = None):
        self.config_path = config_path
        self._environ = environ
        self._config: Optional[Configuration] = None

    @property
    def config(self) -> Configuration:
        """Get the current configuration, loading if necessary."""
        if self._config is None:
            self.load_config()
        assert self._config is not None
        return self._config

    @property
    def settings(self) -> WorkbenchSettings:
        return self.config.settings

    def load_config(self) -> None:
        """Load configuration from file, then apply environment overrides."""
        try:
            if os.path.exists(self.config_path):
                self._config = Configuration.from_file(self.config_path)
            else:
                self.create_default_config()

            assert self._config is not None
            self._config.apply_environment(self._environ)
        except ConfigurationError:
            raise
        except Exception as e:
            raise ConfigurationError(f"Failed to load configuration: {e}")

    def save_config(self) -> None:
        """Save current configuration to file."""
        if self._config is None:
            raise ConfigurationError("No configuration to save")

        self._config.save_to_file(self.config_path)

    def create_default_config(self) -> None:
        """Create and save default configuration."""
        self._config = Configuration(
            settings=WorkbenchSettings(),
            spec_library={
                "golden": "config/specs/golden.shift",
                "full2": "config/specs/full2.shift",
                "fib": "config/specs/fib.shift",
                "period3": "config/specs/period3.shift",
                "noninv": "config/specs/noninv.shift",
                "product": "config/specs/product.shift",
                "tiny": "config/specs/tiny.shift",
            },
        )
        self.save_config()

    def resolve_spec(self, name_or_path: str) -> str:
        """Map a library name to its spec path; paths pass through unchanged."""
        return self.config.spec_library.get(name_or_path, name_or_path)

    def override(self, **values: Any) -> WorkbenchSettings:
        """Return a copy of the settings with manifest overrides applied."""
        known = {f.name for f in fields(WorkbenchSettings)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigurationError(f"Unknown settings: {', '.join(unknown)}")
        merged = {**asdict(self.settings), **values}
        return WorkbenchSettings(**merged)
