"""
Report rendering: CSV tables with a provenance header, or JSON documents.
"""

import csv
import io
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..core.exceptions import CommandExecutionError
from ..core.manifest import RunManifest


def plain(value: Any) -> Any:
    """JSON-safe view: rationals as ``p/q`` strings, tuples as lists."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (int, float, str)):
        return value
    if isinstance(value, dict):
        return {str(k): plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value, key=str) if isinstance(value, (set, frozenset)) else value
        return [plain(v) for v in items]
    if hasattr(value, "to_dict"):
        return plain(value.to_dict())
    return str(value)


def _cell(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if value is None:
        return ""
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(plain(value), sort_keys=True, separators=(",", ":"))
    return str(value)


@dataclass
class Report:
    """Tabular rows plus an optional structured payload.

    CSV renders ``columns``/``rows``/``footer``; JSON renders ``data`` (or
    the table when ``data`` is empty).
    """
    title: str
    columns: List[str] = field(default_factory=list)
    rows: List[Sequence[Any]] = field(default_factory=list)
    footer: List[Sequence[Any]] = field(default_factory=list)
    data: Dict[str, Any] = field(default_factory=dict)

    def payload(self) -> Dict[str, Any]:
        if self.data:
            return self.data
        table = [dict(zip(self.columns, row)) for row in self.rows]
        body: Dict[str, Any] = {"title": self.title, "rows": table}
        if self.footer:
            body["footer"] = [list(row) for row in self.footer]
        return body


class ReportService:
    """Render and write reports; the only writer of report output."""

    def __init__(self, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(__name__)

    def render(self, report: Report, manifest: RunManifest) -> str:
        if manifest.output_format == "json":
            return self._render_json(report, manifest)
        return self._render_csv(report, manifest)

    def _render_csv(self, report: Report, manifest: RunManifest) -> str:
        buffer = io.StringIO()
        provenance = manifest.to_provenance()
        buffer.write(f"# {report.title}\n")
        for key in sorted(provenance):
            buffer.write(f"# {key}: {_cell(provenance[key])}\n")

        writer = csv.writer(buffer, lineterminator="\n")
        if report.columns:
            writer.writerow(report.columns)
            for row in report.rows:
                writer.writerow([_cell(v) for v in row])
        else:
            writer.writerow(["key", "value"])
            for key in sorted(report.data):
                writer.writerow([key, _cell(report.data[key])])
        for row in report.footer:
            writer.writerow([_cell(v) for v in row])
        return buffer.getvalue()

    def _render_json(self, report: Report, manifest: RunManifest) -> str:
        document = {"provenance": plain(manifest.to_provenance()), "report": plain(report.payload())}
        return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def write(self, report: Report, manifest: RunManifest, output: Optional[str] = None) -> str:
        """Write to ``output`` (a file path) or stdout; returns the rendered text."""
        text = self.render(report, manifest)
        if output:
            try:
                path = Path(output)
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(text, encoding="utf-8")
            except OSError as e:
                raise CommandExecutionError(f"Cannot write report to {output}: {e}")
            self.logger.info("Report written to %s", output)
        else:
            sys.stdout.write(text)
            sys.stdout.flush()
        return text
