"""
Service layer for the workbench.
"""

from .logging_service import LoggingService
from .report_service import Report, ReportService
from .system_service import SystemService

__all__ = ["LoggingService", "Report", "ReportService", "SystemService"]
