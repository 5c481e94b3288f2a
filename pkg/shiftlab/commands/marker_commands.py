"""
Marker families: verification of a given family, search for a new one and
the joint-occurrence check.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional

from .base import Command
from ..core.exceptions import ParameterError
from ..core.manifest import RunManifest
from ..dynamics.markers import MarkerParams, joint_occurrence_check, search_marker_family, verify_marker_family
from ..services.report_service import Report


def _load_json(value: Any) -> Any:
    """Inline JSON text or the path of a JSON file."""
    if not isinstance(value, str):
        return value
    text = value
    if not value.lstrip().startswith(("[", "{")):
        try:
            text = Path(value).read_text(encoding="utf-8")
        except OSError as e:
            raise ParameterError(f"Cannot read {value}: {e}")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParameterError(f"Malformed JSON in {value[:40]!r}: {e}")


class MarkerCommand(Command):
    """Handler for ``markers``."""

    @property
    def command_patterns(self) -> List[str]:
        return ["markers"]

    @property
    def description(self) -> str:
        return "Verify or search marker families (--T, --gap, --shift-bound, --delta, --family, --joint)"

    def execute(self, manifest: RunManifest, context: Optional[Dict[str, Any]] = None) -> Report:
        shift_bound = manifest.get("shift_bound")
        params = MarkerParams(
            T=int(manifest.require("T")),
            gap=int(manifest.require("gap")),
            shift_bound=None if shift_bound is None else int(shift_bound),
            delta=float(manifest.get("delta", 0.0)),
        )
        data: Dict[str, Any] = {
            "T": params.T,
            "gap": params.gap,
            "shift_bound": params.shift_bound,
            "delta": params.delta,
            "size_target": params.size_target,
        }

        family = manifest.get("family")
        if family is not None:
            decision = verify_marker_family(_load_json(family), params)
            data["decision"] = decision
            self.logger.info("Marker family valid: %s", decision.valid)
        else:
            settings = self.service(context, "settings")
            budget = int(manifest.get("budget", settings.marker_budget))
            found = search_marker_family(params, budget, manifest.seed)
            data["family"] = [sorted(s) for s in found]
            data["size"] = len(found)
            self.logger.info("Marker search found %d sets for T=%d", len(found), params.T)

        joint = manifest.get("joint")
        if joint is not None:
            data["joint"] = self._joint(_load_json(joint))

        return Report(title=f"markers T={params.T} g={params.gap}", data=data)

    def _joint(self, payload: Dict[str, Any]) -> List[Any]:
        try:
            z1 = self.word_param(payload["z1"])
            z2 = self.word_param(payload["z2"])
            pairs = [(self.word_param(a), self.word_param(b)) for a, b in payload["pairs"]]
            return joint_occurrence_check(z1, z2, payload["A"], payload["B"], int(payload["k"]),
                                          self.word_param(payload["a_star"]), pairs)
        except (KeyError, TypeError, ValueError) as e:
            raise ParameterError(f"Joint-occurrence input needs z1, z2, A, B, k, a_star and pairs: {e}")
