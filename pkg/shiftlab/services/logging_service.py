"""
Logging service implementation.
"""

import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Dict, List, Optional, Union

from ..config.settings import LOG_LEVELS, ConfigManager
from ..core.exceptions import ConfigurationError

LOG_FILE = "shiftlab.log"


class LoggingService:
    """Service for managing workbench logging.

    Console output goes to stderr so that reports written to stdout stay
    byte-identical between runs.
    """

    def __init__(self, config_manager: ConfigManager, log_dir: Optional[str] = None,
                 console: bool = True):
        self.config_manager = config_manager
        self.log_dir = Path(log_dir or config_manager.settings.log_dir)
        self.console = console
        self._setup_logging()

    def _setup_logging(self) -> None:
        """Setup logging configuration."""
        try:
            self.log_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ConfigurationError(f"Cannot create log directory {self.log_dir}: {e}")

        log_level = getattr(logging, self.config_manager.settings.log_level, logging.INFO)

        root_logger = logging.getLogger("shiftlab")
        root_logger.setLevel(log_level)
        root_logger.propagate = False
        for handler in list(root_logger.handlers):
            root_logger.removeHandler(handler)
            handler.close()

        detailed_formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        simple_formatter = logging.Formatter('%(levelname)s - %(message)s')

        # File handler with rotation
        file_handler = logging.handlers.RotatingFileHandler(
            self.log_dir / LOG_FILE,
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5,
            encoding='utf-8'
        )
        file_handler.setLevel(log_level)
        file_handler.setFormatter(detailed_formatter)
        root_logger.addHandler(file_handler)

        if self.console:
            console_handler = logging.StreamHandler(sys.stderr)
            console_handler.setLevel(log_level)
            console_handler.setFormatter(simple_formatter)
            root_logger.addHandler(console_handler)

        root_logger.debug("Logging service initialized at level %s", self.config_manager.settings.log_level)

    def get_logger(self, name: str) -> logging.Logger:
        """Get a logger below the ``shiftlab`` namespace."""
        if not name.startswith("shiftlab"):
            name = f"shiftlab.{name}"
        return logging.getLogger(name)

    def set_log_level(self, level: str) -> None:
        """Set logging level for this run; the configuration file is left untouched."""
        level = level.upper()
        if level not in LOG_LEVELS:
            raise ConfigurationError(f"Invalid log level: {level}")

        root_logger = logging.getLogger("shiftlab")
        root_logger.setLevel(getattr(logging, level))
        for handler in root_logger.handlers:
            handler.setLevel(getattr(logging, level))
        self.config_manager.settings.log_level = level

    def get_log_files(self) -> List[Dict[str, Union[str, int, float]]]:
        """Get list of log files, newest first."""
        log_files = []
        for log_file in self.log_dir.glob("*.log*"):
            stat = log_file.stat()
            log_files.append({
                'name': log_file.name,
                'path': str(log_file),
                'size_bytes': stat.st_size,
                'modified': stat.st_mtime,
            })
        log_files.sort(key=lambda x: x['modified'], reverse=True)
        return log_files

    def shutdown(self) -> None:
        """Close the handlers owned by this service."""
        root_logger = logging.getLogger("shiftlab")
        for handler in list(root_logger.handlers):
            root_logger.removeHandler(handler)
            handler.close()
