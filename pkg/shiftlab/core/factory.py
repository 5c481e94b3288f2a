"""
Factory pattern implementation for creating workbench components.
"""

import logging
from typing import Optional

from ..commands import (
    CommandRegistry,
    EntropyCommand,
    LanguageCommand,
    MarkerCommand,
    NoninvAnalyzeCommand,
    NoninvBuildCommand,
    PartitionCommand,
    PredictionCommand,
)
from ..config.settings import ConfigManager
from ..services.logging_service import LoggingService
from ..services.report_service import ReportService
from ..services.system_service import SystemService
from .exceptions import ConfigurationError


class WorkbenchFactory:
    """Factory for creating workbench components with dependency injection."""

    def __init__(self, config_path: str = "config/workbench.json", log_dir: Optional[str] = None,
                 console: bool = True):
        self.config_path = config_path
        self.log_dir = log_dir
        self.console = console
        self._config_manager: Optional[ConfigManager] = None
        self._logging_service: Optional[LoggingService] = None
        self._system_service: Optional[SystemService] = None
        self._report_service: Optional[ReportService] = None
        self._command_registry: Optional[CommandRegistry] = None

    @property
    def config_manager(self) -> ConfigManager:
        """Get or create config manager instance."""
        if self._config_manager is None:
            try:
                self._config_manager = ConfigManager(self.config_path)
            except Exception as e:
                raise ConfigurationError(f"Failed to create config manager: {e}")
        return self._config_manager

    @property
    def logging_service(self) -> LoggingService:
        """Get or create logging service instance."""
        if self._logging_service is None:
            try:
                self._logging_service = LoggingService(self.config_manager, self.log_dir, self.console)
            except ConfigurationError:
                raise
            except Exception as e:
                raise ConfigurationError(f"Failed to create logging service: {e}")
        return self._logging_service

    @property
    def system_service(self) -> SystemService:
        if self._system_service is None:
            logger = self.logging_service.get_logger("services.systems")
            self._system_service = SystemService(self.config_manager.settings, logger)
        return self._system_service

    @property
    def report_service(self) -> ReportService:
        if self._report_service is None:
            self._report_service = ReportService(self.logging_service.get_logger("services.reports"))
        return self._report_service

    @property
    def command_registry(self) -> CommandRegistry:
        """Get or create command registry with all commands registered."""
        if self._command_registry is None:
            try:
                self._command_registry = self._create_command_registry()
            except Exception as e:
                raise ConfigurationError(f"Failed to create command registry: {e}")
        return self._command_registry

    def _create_command_registry(self) -> CommandRegistry:
        registry = CommandRegistry()
        logger = self.logging_service.get_logger("commands")

        for command in (
            LanguageCommand(logger),
            EntropyCommand(logger),
            PredictionCommand(logger),
            NoninvBuildCommand(logger),
            NoninvAnalyzeCommand(logger),
            PartitionCommand(logger),
            MarkerCommand(logger),
        ):
            registry.register(command)

        logger.debug("Command registry created with %d handlers", len(registry))
        return registry

    def create_workbench(self) -> 'Workbench':
        """Create a fully configured Workbench instance."""
        # Import here to avoid circular imports
        from .workbench import Workbench

        return Workbench(
            config_manager=self.config_manager,
            command_registry=self.command_registry,
            logging_service=self.logging_service,
            system_service=self.system_service,
            report_service=self.report_service,
        )

    def reset_services(self) -> None:
        """Reset all service instances (useful for testing or reconfiguration)."""
        if self._logging_service is not None:
            self._logging_service.shutdown()
        self._config_manager = None
        self._logging_service = None
        self._system_service = None
        self._report_service = None
        self._command_registry = None

    def validate_configuration(self) -> bool:
        """Validate the current configuration."""
        try:
            self.config_manager.config.validate()
            return True
        except Exception as e:
            logging.getLogger("shiftlab.factory").error("Configuration validation failed: %s", e)
            return False

    def get_service_status(self) -> dict:
        """Which services have been created so far."""
        return {
            'config_manager': self._config_manager is not None,
            'logging_service': self._logging_service is not None,
            'system_service': self._system_service is not None,
            'report_service': self._report_service is not None,
            'command_registry': self._command_registry is not None,
        }
