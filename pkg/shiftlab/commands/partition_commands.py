"""
Partition entropies for a weighted sample read from CSV.
"""

from typing import Any, Dict, List, Optional

from .base import Command
from ..core.manifest import RunManifest
from ..dynamics.partitions import equivalent, load_partitions, rohlin_distance, summarize, truncate
from ..services.report_service import Report


class PartitionCommand(Command):
    """Handler for ``partition``."""

    @property
    def command_patterns(self) -> List[str]:
        return ["partition"]

    @property
    def description(self) -> str:
        return "Entropies and Rohlin distance of two partitions (--input, --truncate)"

    def execute(self, manifest: RunManifest, context: Optional[Dict[str, Any]] = None) -> Report:
        path = manifest.require("input")
        p, q = load_partitions(path)
        summary = summarize(p, q).to_dict()
        rows: List[List[Any]] = [[name, value] for name, value in summary.items()]
        rows.append(["equivalent", equivalent(p, q)])

        n = manifest.get("truncate")
        if n is not None:
            n = int(n)
            rows.append([f"d(P,P^{n})", rohlin_distance(p, truncate(p, n))])
            rows.append([f"d(Q,Q^{n})", rohlin_distance(q, truncate(q, n))])

        self.logger.info("Partitions from %s: %d points, %d and %d atoms",
                         path, p.sample.size, len(p.atoms), len(q.atoms))
        return Report(
            title=f"partition {path}",
            columns=["quantity", "value"],
            rows=rows,
            data={row[0]: row[1] for row in rows},
        )
