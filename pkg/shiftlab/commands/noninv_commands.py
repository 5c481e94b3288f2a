"""
Commands for the non-invertible construction: stage layouts, materialized
dumps, cylinder frequencies and the non-invertibility witnesses.
"""

from collections import Counter
from pathlib import Path
from typing import Any, Dict, List, Optional

from .base import Command
from ..core.exceptions import BudgetExceededError, CommandExecutionError, ShiftLabError
from ..core.manifest import RunManifest
from ..dynamics.noninv import (
    CylinderSet,
    NonInvertibleSystem,
    cylinder_frequency,
    mixture_statistic,
    stage_witness,
    zero_point_witness,
)
from ..dynamics.words import write_words
from ..services.report_service import Report

DEFAULT_CYLINDER = "[3/4,1]"
DEFAULT_PREFIX = 100000
DEFAULT_WINDOW = 100
DEFAULT_WINDOW_LEAD = 60
DEFAULT_WITNESS_LENGTH = 4
DEFAULT_WITNESS_COUNT = 8
DEFAULT_DECOMPOSE_LENGTH = 4096


class NoninvBuildCommand(Command):
    """Handler for ``noninv-build``: stage table, optionally dumping materialized stages."""

    @property
    def command_patterns(self) -> List[str]:
        return ["noninv-build"]

    @property
    def description(self) -> str:
        return "Lay out and materialize the construction stages (--spec, --dump)"

    def execute(self, manifest: RunManifest, context: Optional[Dict[str, Any]] = None) -> Report:
        spec = self.load_spec(manifest, context)
        system = self.service(context, "systems").build_system(spec)

        rows = []
        for record in system.records:
            rows.append([
                record.n, record.length, record.depth, record.multiplicity, record.len_y,
                record.next_length, record.summability, record.astronomical,
            ])

        dump = manifest.get("dump")
        if dump:
            self._dump(system, Path(dump))

        return Report(
            title=f"noninv-build {spec.label}",
            columns=["n", "L_n", "D_n", "M_n", "len_y", "L_next", "summability", "astronomical"],
            rows=rows,
            footer=[["# materialized", system.materialized]],
            data={
                "system": f"noninv:{spec.label}",
                "stages": [record.to_dict() for record in system.records],
                "summability": [record.summability for record in system.records],
                "materialized": system.materialized,
            },
        )

    def _dump(self, system: NonInvertibleSystem, directory: Path) -> None:
        try:
            directory.mkdir(parents=True, exist_ok=True)
            for n in range(system.materialized + 1):
                write_words([system.stage(n)], directory / f"x_{n}.txt")
        except OSError as e:
            raise CommandExecutionError(f"Cannot dump stages to {directory}: {e}")
        self.logger.info("Dumped %d stage(s) to %s", system.materialized + 1, directory)


class NoninvAnalyzeCommand(Command):
    """Handler for ``noninv-analyze``.

    Reports cylinder frequencies with the stage ratio checks, the COPY share
    of a window, the zero-point witness, preimage witnesses for short words
    and a decomposition summary.
    """

    @property
    def command_patterns(self) -> List[str]:
        return ["noninv-analyze"]

    @property
    def description(self) -> str:
        return "Frequencies, witnesses and decompositions of the construction (--spec, --cylinder, --prefix)"

    def execute(self, manifest: RunManifest, context: Optional[Dict[str, Any]] = None) -> Report:
        spec = self.load_spec(manifest, context)
        system = self.service(context, "systems").build_system(spec)
        prefix_length = int(manifest.get("prefix", DEFAULT_PREFIX))

        cylinder = CylinderSet.parse(str(manifest.get("cylinder", DEFAULT_CYLINDER)))
        name = str(cylinder)
        system.record_cylinder(name, cylinder)
        records = [r for r in system.records
                   if r.next_length is not None and r.next_length <= prefix_length and name in r.i_counts]
        skipped = [r.n for r in system.records if r not in records]
        if skipped:
            self.logger.info("Ratio checks skipped for stages %s: beyond the %d-symbol prefix", skipped, prefix_length)

        checkpoints = self._checkpoints(manifest.get("checkpoints"), prefix_length)
        frequencies = cylinder_frequency(system.stream(), cylinder, checkpoints, records, name,
                                         system.stream_budget)

        data: Dict[str, Any] = {
            "system": f"noninv:{spec.label}",
            "prefix": prefix_length,
            "frequencies": frequencies,
            "mixture": self._mixture(system, manifest),
            "zero_point": self._zero_point(system),
            "stage_witnesses": self._stage_witnesses(system, manifest),
            "decomposition": self._decomposition(system, manifest),
        }
        return Report(title=f"noninv-analyze {spec.label}", data=data)

    @staticmethod
    def _checkpoints(raw: Any, prefix_length: int) -> List[int]:
        if raw is None:
            return [prefix_length]
        if isinstance(raw, (list, tuple)):
            return [int(v) for v in raw]
        return [int(v) for v in str(raw).split(",") if v.strip()]

    def _mixture(self, system: NonInvertibleSystem, manifest: RunManifest) -> Dict[str, Any]:
        n = int(manifest.get("stage", 0))
        record = system.records[n]
        if record.multiplicity is None:
            raise BudgetExceededError(f"stage {n} is astronomical; no window default exists")
        start = int(manifest.get("window_start", max(record.multiplicity * record.length - DEFAULT_WINDOW_LEAD, 0)))
        length = int(manifest.get("window", DEFAULT_WINDOW))
        value = mixture_statistic(system, n, start, length)
        self.logger.info("COPY share of [%d, %d) at stage %d: %s", start, start + length, n, value)
        return {"stage": n, "start": start, "length": length, "lambda": value}

    def _zero_point(self, system: NonInvertibleSystem) -> Optional[Dict[str, Any]]:
        try:
            return zero_point_witness(system, 0).to_dict()
        except BudgetExceededError as e:
            self.logger.warning("No zero-point witness: %s", e.message)
            return None

    def _stage_witnesses(self, system: NonInvertibleSystem, manifest: RunManifest) -> List[Dict[str, Any]]:
        n = min(int(manifest.get("witness_stage", 1)), system.materialized)
        length = int(manifest.get("witness_length", DEFAULT_WITNESS_LENGTH))
        stage_length = len(system.stage(n))
        length = min(length, stage_length)
        starts = stage_length - length + 1
        step = max(starts // DEFAULT_WITNESS_COUNT, 1)

        witnesses = []
        for j in range(0, starts, step)[:DEFAULT_WITNESS_COUNT]:
            try:
                witnesses.append(stage_witness(system, n, j, length).to_dict())
            except ShiftLabError as e:
                self.logger.warning("No stage witness for x_%d[%d:%d]: %s", n, j, j + length, e.message)
        return witnesses

    def _decomposition(self, system: NonInvertibleSystem, manifest: RunManifest) -> Dict[str, Any]:
        n = int(manifest.get("stage", 0))
        length = int(manifest.get("decompose_length", DEFAULT_DECOMPOSE_LENGTH))
        reports = system.decompose(n, 0, length)
        kinds = Counter(report.segment.kind for report in reports)
        envelope_failures = [report.to_dict() for report in reports if not report.envelope_ok]
        return {
            "stage": n,
            "length": length,
            "segments": dict(sorted(kinds.items())),
            "envelope_failures": envelope_failures,
            "ratio_checked": sum(report.ratio_checked for report in reports),
            "ratio_violations": sum(report.ratio_violations for report in reports),
        }
