"""
Entropy commands: complexity tables, exact SFT entropy, separated counts
and preimage-tree families.
"""

from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from .base import Command
from ..core.exceptions import UsageError
from ..core.manifest import RunManifest
from ..dynamics.entropy import (
    complexity,
    entropy_estimate,
    to_bits,
    first_difference,
    preimage_tree,
    prepend_selectors,
    separated_profile,
    sft_entropy_exact,
    shift_once,
    weighted_distance,
)
from ..dynamics.noninv import tau
from ..dynamics.subshifts import FullShift, GraphShift, LanguageOracle, PeriodicOrbits, TransferGraph, sft_approximation
from ..services.report_service import Report
from ..speclang.parser import SystemSpec

DEFAULT_N_MAX = 12
DEFAULT_EPS = "1/10"
DEFAULT_PREFIX = 100000
DEFAULT_TREE_BASE = 8


class EntropyCommand(Command):
    """Handler for ``entropy``."""

    @property
    def command_patterns(self) -> List[str]:
        return ["entropy"]

    @property
    def description(self) -> str:
        return "Complexity table and entropy estimate (--spec, --nmax, --tree-depth)"

    def execute(self, manifest: RunManifest, context: Optional[Dict[str, Any]] = None) -> Report:
        spec = self.load_spec(manifest, context)
        if spec.kind == "noninv":
            return self._separated(spec, manifest, context)

        oracle = self.service(context, "systems").build_oracle(spec)
        n_max = int(manifest.get("nmax", DEFAULT_N_MAX))
        table = complexity(oracle, n_max)
        estimate = entropy_estimate(table)
        unit = self._unit(manifest)

        footer: List[List[Any]] = [
            ["# final_slope", unit(estimate.final_slope)],
            ["# fit_slope", unit(estimate.fit_slope)],
            ["# note", estimate.note],
        ]
        data: Dict[str, Any] = {
            "system": oracle.oracle_id,
            "table": [[row.n, row.count, unit(row.slope)] for row in table.rows],
            "unit": "bits" if manifest.get("bits") else "nats",
            "final_slope": unit(estimate.final_slope),
            "fit_slope": unit(estimate.fit_slope),
            "note": estimate.note,
            "submultiplicative": table.is_submultiplicative(),
        }

        graph = self._exact_graph(oracle)
        if graph is not None:
            settings = self.service(context, "settings")
            exact = sft_entropy_exact(graph, settings.power_iteration_cap, settings.float_tolerance)
            footer.append(["# exact_entropy", unit(exact)])
            data["exact_entropy"] = unit(exact)

        depth = manifest.get("tree_depth")
        if depth is not None:
            family = self._full_shift_tree(oracle, int(depth))
            footer.append(["# tree_size", family.size])
            footer.append(["# tree_slope", family.slope])
            data["tree"] = {"depth": family.depth, "size": family.size, "slope": family.slope,
                            "pairwise_checked": family.pairwise_checked}

        self.logger.info("Entropy of %s: final slope %.6f over n <= %d",
                         oracle.oracle_id, estimate.final_slope, table.n_max)
        return Report(
            title=f"entropy {oracle.oracle_id}",
            columns=["n", "p_n", "slope"],
            rows=[[row.n, row.count, unit(row.slope)] for row in table.rows],
            footer=footer,
            data=data,
        )

    @staticmethod
    def _unit(manifest: RunManifest) -> Callable[[float], float]:
        return to_bits if manifest.get("bits") else float

    @staticmethod
    def _exact_graph(oracle: LanguageOracle) -> Optional[TransferGraph]:
        if isinstance(oracle, GraphShift):
            return oracle.graph
        if isinstance(oracle, FullShift):
            return sft_approximation(oracle, 1)
        if isinstance(oracle, PeriodicOrbits):
            return sft_approximation(oracle, max(len(p) for p in oracle.periods))
        return None

    def _full_shift_tree(self, oracle: LanguageOracle, depth: int):
        if not isinstance(oracle, FullShift):
            raise UsageError("--tree-depth on a subshift needs a full shift or a noninv spec")
        base = (oracle.alphabet[0],)
        return preimage_tree(base, prepend_selectors(oracle.alphabet), depth,
                             shift_once, first_difference, delta=1, strict=False)

    def _separated(self, spec: SystemSpec, manifest: RunManifest,
                   context: Optional[Dict[str, Any]]) -> Report:
        system = self.service(context, "systems").build_system(spec)
        n_max = int(manifest.get("nmax", DEFAULT_N_MAX))
        eps = Fraction(str(manifest.get("eps", DEFAULT_EPS)))
        prefix_length = int(manifest.get("prefix", DEFAULT_PREFIX))

        rows = separated_profile(system.stream(), range(1, n_max + 1), eps, prefix_length)
        footer: List[List[Any]] = [["# eps", str(eps)], ["# prefix", prefix_length]]
        data: Dict[str, Any] = {
            "system": f"noninv:{spec.label}",
            "eps": eps,
            "prefix": prefix_length,
            "table": [list(row) for row in rows],
        }

        depth = manifest.get("tree_depth")
        if depth is not None:
            base = system.prefix(int(manifest.get("tree_base", DEFAULT_TREE_BASE)))
            selectors = (lambda y: tau("0", y, system.exact_cap), lambda y: tau("1", y, system.exact_cap))
            family = preimage_tree(base, selectors, int(depth), shift_once, weighted_distance)
            footer.append(["# tree_size", family.size])
            footer.append(["# tree_slope", family.slope])
            footer.append(["# tree_min_separation", family.level_separation[-1] if family.level_separation else None])
            data["tree"] = {"depth": family.depth, "size": family.size, "slope": family.slope,
                            "level_separation": family.level_separation}

        self.logger.info("Separated profile of %s up to n = %d", spec.label, n_max)
        return Report(
            title=f"entropy noninv:{spec.label}",
            columns=["n", "count", "slope"],
            rows=[list(row) for row in rows],
            footer=footer,
            data=data,
        )