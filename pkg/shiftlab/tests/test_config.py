"""
Tests for configuration management.
"""

import json
import tempfile
from pathlib import Path

import pytest

from shiftlab.config.settings import ConfigManager, Configuration, WorkbenchSettings
from shiftlab.core.exceptions import ConfigurationError


class TestWorkbenchSettings:
    """Test WorkbenchSettings dataclass."""

    def test_default_settings(self):
        """Test default settings creation."""
        settings = WorkbenchSettings()

        assert settings.log_level == "INFO"
        assert settings.enumeration_cap == 2 ** 22
        assert settings.exact_cap == 65536
        assert settings.test_horizon == 20
        assert settings.stream_budget == 10 ** 7
        assert settings.default_format == "csv"

    def test_log_level_is_normalized(self):
        """Test lower-case log levels are accepted."""
        assert WorkbenchSettings(log_level="debug").log_level == "DEBUG"

    def test_invalid_log_level(self):
        """Test invalid log level."""
        with pytest.raises(ConfigurationError):
            WorkbenchSettings(log_level="INVALID")

    def test_invalid_budgets(self):
        """Test non-positive budgets."""
        with pytest.raises(ConfigurationError):
            WorkbenchSettings(enumeration_cap=0)

        with pytest.raises(ConfigurationError):
            WorkbenchSettings(stream_budget=-1)

        with pytest.raises(ConfigurationError):
            WorkbenchSettings(exact_cap=True)

    def test_invalid_tolerance_and_format(self):
        """Test tolerance range and report format."""
        with pytest.raises(ConfigurationError):
            WorkbenchSettings(float_tolerance=0)

        with pytest.raises(ConfigurationError):
            WorkbenchSettings(default_format="xml")


class TestConfiguration:
    """Test Configuration class."""

    def test_default_configuration(self):
        """Test creating default configuration."""
        config = Configuration()

        assert config.spec_library == {}
        assert isinstance(config.settings, WorkbenchSettings)

    def test_from_dict_valid(self):
        """Test creating configuration from valid dictionary."""
        data = {
            "settings": {"enumeration_cap": 1024, "log_level": "WARNING"},
            "spec_library": {"golden": "config/specs/golden.shift"},
        }

        config = Configuration.from_dict(data)

        assert config.settings.enumeration_cap == 1024
        assert config.settings.log_level == "WARNING"
        assert config.spec_library["golden"] == "config/specs/golden.shift"

    def test_from_dict_unknown_setting(self):
        """Test unknown settings keys are rejected."""
        with pytest.raises(ConfigurationError):
            Configuration.from_dict({"settings": {"sample_rate": 5}})

    def test_to_dict(self):
        """Test converting configuration to dictionary."""
        config = Configuration(spec_library={"b": "b.shift", "a": "a.shift"})

        data = config.to_dict()

        assert list(data["spec_library"]) == ["a", "b"]
        assert data["settings"]["marker_budget"] == 65536

    def test_library_entries_must_be_spec_files(self):
        """Test validation of spec library paths."""
        config = Configuration(spec_library={"golden": "golden.txt"})

        with pytest.raises(ConfigurationError):
            config.validate()

    def test_environment_overrides(self):
        """Test SHIFTLAB_* variables override budgets."""
        config = Configuration()
        config.apply_environment({"SHIFTLAB_ENUMERATION_CAP": "4096", "SHIFTLAB_EXACT_CAP": "128"})

        assert config.settings.enumeration_cap == 4096
        assert config.settings.exact_cap == 128

    def test_environment_override_must_be_integer(self):
        """Test malformed environment overrides."""
        with pytest.raises(ConfigurationError):
            Configuration().apply_environment({"SHIFTLAB_STREAM_BUDGET": "lots"})

        with pytest.raises(ConfigurationError):
            Configuration().apply_environment({"SHIFTLAB_STREAM_BUDGET": "0"})


class TestConfigManager:
    """Test ConfigManager class."""

    def test_config_manager_with_nonexistent_file(self):
        """Test config manager with non-existent file."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = Path(temp_dir) / "workbench.json"
            manager = ConfigManager(str(config_path), environ={})

            # Should create default config
            assert isinstance(manager.config, Configuration)
            assert config_path.exists()
            assert "golden" in manager.config.spec_library

    def test_config_manager_with_valid_file(self):
        """Test config manager with valid config file."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = Path(temp_dir) / "workbench.json"

            test_data = {"settings": {"search_budget": 6}, "spec_library": {}}

            with open(config_path, 'w') as f:
                json.dump(test_data, f)

            manager = ConfigManager(str(config_path), environ={})
            assert manager.settings.search_budget == 6

    def test_config_manager_with_invalid_json(self):
        """Test config manager with invalid JSON file."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = Path(temp_dir) / "workbench.json"

            with open(config_path, 'w') as f:
                f.write("invalid json content")

            with pytest.raises(ConfigurationError):
                ConfigManager(str(config_path), environ={}).load_config()

    def test_save_config(self):
        """Test saving configuration to file."""
        with tempfile.TemporaryDirectory() as temp_dir:
            config_path = Path(temp_dir) / "workbench.json"
            manager = ConfigManager(str(config_path), environ={})

            manager.config.settings.test_horizon = 12
            manager.save_config()

            manager2 = ConfigManager(str(config_path), environ={})
            assert manager2.settings.test_horizon == 12

    def test_environment_applied_on_load(self, temp_config_file):
        """Test the manager applies its environment mapping."""
        manager = ConfigManager(temp_config_file, environ={"SHIFTLAB_SEARCH_BUDGET": "3"})

        assert manager.settings.search_budget == 3

    def test_resolve_spec(self, config_manager, spec_dir):
        """Test library names resolve and paths pass through."""
        assert config_manager.resolve_spec("golden") == str(spec_dir / "golden.shift")
        assert config_manager.resolve_spec("some/where.shift") == "some/where.shift"

    def test_override(self, config_manager):
        """Test settings overrides return a validated copy."""
        settings = config_manager.override(enumeration_cap=64)

        assert settings.enumeration_cap == 64
        assert config_manager.settings.enumeration_cap == 2 ** 22

        with pytest.raises(ConfigurationError):
            config_manager.override(volume=11)
