"""
Prediction commands: past branching, predictor and forcing words, and the
periodic-union decision for SFT approximations.
"""

from typing import Any, Dict, List, Optional

from .base import Command
from ..core.exceptions import UsageError
from ..core.manifest import RunManifest
from ..dynamics.prediction import (
    find_forcing_word,
    find_predictor_word,
    is_periodic_union,
    past_branching,
    verify_predictor,
)
from ..dynamics.subshifts import sft_approximation
from ..services.report_service import Report


class PredictionCommand(Command):
    """Handler for ``predict``.

    ``--m``/``--k`` give the branching profile; ``--a`` adds a predictor
    search, ``--u`` a forcing-word search and ``--order`` the periodic-union
    test on the order-m approximation.
    """

    @property
    def command_patterns(self) -> List[str]:
        return ["predict"]

    @property
    def description(self) -> str:
        return "Past branching, predictor and forcing words (--spec, --m, --k, --a, --u, --order)"

    def execute(self, manifest: RunManifest, context: Optional[Dict[str, Any]] = None) -> Report:
        spec = self.load_spec(manifest, context)
        oracle = self.service(context, "systems").build_oracle(spec)
        settings = self.service(context, "settings")
        budget = int(manifest.get("budget", settings.search_budget))

        data: Dict[str, Any] = {"system": oracle.oracle_id, "sample_based": oracle.sample_based}

        if manifest.get("m") is not None or manifest.get("k") is not None:
            m = int(manifest.require("m"))
            k = int(manifest.require("k"))
            profile = past_branching(oracle, m, k)
            data.update(profile.to_dict())
            self.logger.info("Past branching of %s at (m=%d, k=%d): %d", oracle.oracle_id, m, k, profile.max_extensions)

        if manifest.get("a") is not None:
            a = self.word_param(manifest.get("a"))
            k = int(manifest.get("k", 1))
            witness = find_predictor_word(oracle, a, k, budget)
            data["predictor"] = witness
            data["predictor_verified"] = verify_predictor(oracle, witness.b, a, k)

        if manifest.get("u") is not None:
            u = self.word_param(manifest.get("u"))
            data["forcing"] = find_forcing_word(oracle, u, budget)

        if manifest.get("order") is not None:
            order = int(manifest.get("order"))
            data["periodic_union"] = is_periodic_union(sft_approximation(oracle, order))
            data["order"] = order

        if len(data) == 2:
            raise UsageError("'predict' needs --m/--k, --a, --u or --order")

        return Report(title=f"predict {oracle.oracle_id}", data=data)
