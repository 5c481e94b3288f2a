"""
Language listing: ``L_n(X)`` of a declared system.
"""

from typing import Any, Dict, List, Optional

from .base import Command
from ..core.manifest import RunManifest
from ..dynamics.subshifts import is_extendable, is_factor_closed, language
from ..dynamics.words import sorted_words, word_str
from ..services.report_service import Report


class LanguageCommand(Command):
    """Handler for ``lang``: list the length-n words, sorted."""

    @property
    def command_patterns(self) -> List[str]:
        return ["lang"]

    @property
    def description(self) -> str:
        return "List L_n(X) for a spec (--spec, --n)"

    def execute(self, manifest: RunManifest, context: Optional[Dict[str, Any]] = None) -> Report:
        spec = self.load_spec(manifest, context)
        n = int(manifest.require("n"))
        oracle = self.service(context, "systems").build_oracle(spec)

        words = sorted_words(language(oracle, n))
        self.logger.info("L_%d of %s holds %d words", n, oracle.oracle_id, len(words))

        footer: List[List[Any]] = [["# count", len(words)]]
        if manifest.get("check", False):
            footer.append(["# factor_closed", is_factor_closed(oracle, n)])
            footer.append(["# extendable", is_extendable(oracle, n)])

        return Report(
            title=f"language {oracle.oracle_id} n={n}",
            columns=["word"],
            rows=[[word_str(w)] for w in words],
            footer=footer,
            data={
                "system": oracle.oracle_id,
                "n": n,
                "count": len(words),
                "sample_based": oracle.sample_based,
                "words": [word_str(w) for w in words],
            },
        )
