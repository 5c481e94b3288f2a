"""Configuration package."""

from .settings import ConfigManager, Configuration, WorkbenchSettings

__all__ = ["ConfigManager", "Configuration", "WorkbenchSettings"]
