"""
The workbench: runs one manifest through the command registry and writes
its report.
"""

import dataclasses
from typing import Any, Dict, Optional

from ..commands.base import CommandRegistry
from ..config.settings import ConfigManager
from ..services.logging_service import LoggingService
from ..services.report_service import Report, ReportService
from ..services.system_service import SystemService
from .exceptions import ShiftLabError, UsageError
from .manifest import RunManifest

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2


class Workbench:
    """Entry point for running subcommands with injected services."""

    def __init__(
        self,
        config_manager: ConfigManager,
        command_registry: CommandRegistry,
        logging_service: LoggingService,
        system_service: SystemService,
        report_service: ReportService,
    ):
        self.config_manager = config_manager
        self.command_registry = command_registry
        self.logging_service = logging_service
        self.system_service = system_service
        self.report_service = report_service
        self.logger = logging_service.get_logger("workbench")

    def _context(self) -> Dict[str, Any]:
        return {
            "systems": self.system_service,
            "settings": self.config_manager.settings,
            "config": self.config_manager,
        }

    def resolve(self, manifest: RunManifest) -> RunManifest:
        """Replace a spec library name with its path."""
        if manifest.spec is None:
            return manifest
        return dataclasses.replace(manifest, spec=self.config_manager.resolve_spec(manifest.spec))

    def run(self, manifest: RunManifest) -> Report:
        """Execute a manifest and return its report; errors propagate."""
        manifest = self.resolve(manifest)
        self.logger.info("Running %s on %s", manifest.subcommand, manifest.spec or "-")
        return self.command_registry.execute_command(manifest, self._context())

    def execute(self, manifest: RunManifest, output: Optional[str] = None) -> int:
        """Run a manifest, write its report and map the outcome to an exit status."""
        try:
            report = self.run(manifest)
            self.report_service.write(report, self.resolve(manifest), output)
            return EXIT_OK
        except UsageError as e:
            self.logger.error("Usage error: %s", e.message)
            return EXIT_USAGE
        except ShiftLabError as e:
            self.logger.error("%s: %s", type(e).__name__, e.message)
            return EXIT_FAILURE

    def get_status(self) -> Dict[str, Any]:
        return {
            'config_path': self.config_manager.config_path,
            'log_level': self.config_manager.settings.log_level,
            'registered_commands': len(self.command_registry),
            'command_handlers': sorted(self.command_registry.list_commands()),
            'log_files': [entry['name'] for entry in self.logging_service.get_log_files()],
        }

    def get_commands_info(self) -> Dict[str, Dict[str, Any]]:
        """Get information about all registered commands."""
        return self.command_registry.list_commands()

    def set_log_level(self, level: str) -> None:
        self.logging_service.set_log_level(level)
        self.logger.info("Log level set to: %s", level)
