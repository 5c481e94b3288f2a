"""
Command handlers for the workbench subcommands.
"""

from .base import Command, CommandRegistry
from .entropy_commands import EntropyCommand
from .language_commands import LanguageCommand
from .marker_commands import MarkerCommand
from .noninv_commands import NoninvAnalyzeCommand, NoninvBuildCommand
from .partition_commands import PartitionCommand
from .prediction_commands import PredictionCommand

__all__ = [
    "Command",
    "CommandRegistry",
    "LanguageCommand",
    "EntropyCommand",
    "PredictionCommand",
    "NoninvBuildCommand",
    "NoninvAnalyzeCommand",
    "PartitionCommand",
    "MarkerCommand",
]
