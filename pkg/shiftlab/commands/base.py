"""
Base command interface and the command registry.
"""

import logging
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Tuple

from ..core.exceptions import CommandExecutionError, ShiftLabError, UsageError
from ..core.manifest import RunManifest
from ..services.report_service import Report
from ..speclang.parser import SystemSpec


class Command(ABC):
    """Abstract base class for all workbench subcommands."""

    def __init__(self, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(f"shiftlab.commands.{self.__class__.__name__}")

    def can_handle(self, subcommand: str) -> bool:
        """Check if this command handler can process the given subcommand."""
        return subcommand in self.command_patterns

    @abstractmethod
    def execute(self, manifest: RunManifest, context: Optional[Dict[str, Any]] = None) -> Report:
        """Run the subcommand and return its report."""
        pass

    @property
    @abstractmethod
    def command_patterns(self) -> List[str]:
        """Subcommand names this handler supports."""
        pass

    @property
    @abstractmethod
    def description(self) -> str:
        """Return description of what this command does."""
        pass

    @staticmethod
    def service(context: Optional[Dict[str, Any]], name: str) -> Any:
        if not context or name not in context:
            raise CommandExecutionError(f"Command context lacks '{name}'")
        return context[name]

    @staticmethod
    def word_param(text: str) -> Tuple[str, ...]:
        """Command-line word: whitespace-separated tokens, or one symbol per character."""
        text = str(text)
        return tuple(text.split()) if " " in text.strip() else tuple(text.strip())

    def load_spec(self, manifest: RunManifest, context: Optional[Dict[str, Any]]) -> SystemSpec:
        if not manifest.spec:
            raise UsageError(f"'{manifest.subcommand}' needs --spec")
        return self.service(context, "systems").load(manifest.spec)


class CommandRegistry:
    """Registry for managing command handlers."""

    def __init__(self) -> None:
        self._commands: List[Command] = []
        self.logger = logging.getLogger("shiftlab.commands.registry")

    def register(self, command: Command) -> None:
        """Register a command handler."""
        self._commands.append(command)
        self.logger.debug("Registered command handler: %s", command.__class__.__name__)

    def unregister(self, command: Command) -> None:
        """Unregister a command handler."""
        if command in self._commands:
            self._commands.remove(command)
            self.logger.debug("Unregistered command handler: %s", command.__class__.__name__)

    def get_handler(self, subcommand: str) -> Optional[Command]:
        """Get the handler for a subcommand."""
        for handler in self._commands:
            if handler.can_handle(subcommand):
                return handler
        return None

    def execute_command(self, manifest: RunManifest, context: Optional[Dict[str, Any]] = None) -> Report:
        """Execute a manifest with the appropriate handler.

        Domain errors pass through unchanged; anything else is wrapped in
        CommandExecutionError.
        """
        handler = self.get_handler(manifest.subcommand)
        if handler is None:
            raise UsageError(f"No handler found for subcommand: {manifest.subcommand}")

        try:
            return handler.execute(manifest, context)
        except ShiftLabError:
            raise
        except Exception as e:
            self.logger.error("Error executing '%s': %s", manifest.subcommand, e)
            raise CommandExecutionError(f"Failed to execute {manifest.subcommand}: {e}")

    def list_commands(self) -> Dict[str, Dict[str, Any]]:
        """List all registered commands with their patterns and descriptions."""
        return {
            handler.__class__.__name__: {
                'patterns': list(handler.command_patterns),
                'description': handler.description,
            }
            for handler in self._commands
        }

    def __len__(self) -> int:
        return len(self._commands)
