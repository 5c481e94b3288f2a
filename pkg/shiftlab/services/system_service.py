"""
Turns parsed system specs into language oracles and construction systems.
"""

import logging
from fractions import Fraction
from typing import Dict, Optional

from ..config.settings import WorkbenchSettings
from ..core.exceptions import ParameterError, ScheduleError
from ..dynamics.noninv import ConstructionSchedule, NonInvertibleSystem
from ..dynamics.subshifts import (
    ForbiddenWordsShift,
    FullShift,
    LanguageOracle,
    PeriodicOrbits,
    PrefixStreamOracle,
    SturmianShift,
    SubstitutionShift,
    product_oracle,
)
from ..speclang.parser import SystemSpec, load_spec

DEFAULT_SAMPLE_HORIZON = 4096


class SystemService:
    """Builds oracles and non-invertible systems under the configured budgets."""

    def __init__(self, settings: WorkbenchSettings, logger: Optional[logging.Logger] = None):
        self.settings = settings
        self.logger = logger or logging.getLogger(__name__)

    def load(self, path: str) -> SystemSpec:
        spec = load_spec(path)
        self.logger.info("Loaded %s spec '%s' from %s", spec.kind, spec.label, path)
        return spec

    def build_oracle(self, spec: SystemSpec) -> LanguageOracle:
        """A LanguageOracle for any kind; ``noninv`` gives a sample-based oracle."""
        cap = self.settings.enumeration_cap
        kind = spec.kind

        if kind == "full":
            return FullShift(spec.get("alphabet"), cap)
        if kind == "periodic":
            return PeriodicOrbits(spec.get("words"), spec.get("alphabet"), cap)
        if kind == "sft":
            return ForbiddenWordsShift(spec.get("alphabet"), spec.get("forbid"), cap)
        if kind == "substitution":
            return SubstitutionShift(self._rules(spec), spec.get("seed"), cap)
        if kind == "sturmian":
            return SturmianShift(Fraction(spec.get("alpha")), spec.get("irrational"), cap)
        if kind == "product":
            left, right = (self.build_oracle(component) for component in spec.components)
            return product_oracle(left, right)
        if kind == "noninv":
            system = self.build_system(spec)
            horizon = spec.get("horizon", DEFAULT_SAMPLE_HORIZON)
            return PrefixStreamOracle(system.stream(), horizon, f"noninv:{spec.label}", cap)
        raise ParameterError(f"Unsupported system kind '{kind}'")

    @staticmethod
    def _rules(spec: SystemSpec) -> Dict[str, str]:
        rules = {}
        for rule in spec.get("rules"):
            source, _, image = rule.partition("->")
            rules[source.strip()] = image.strip()
        return rules

    def schedule(self, spec: SystemSpec) -> ConstructionSchedule:
        if spec.kind != "noninv":
            raise ScheduleError(f"'{spec.label}' is a {spec.kind} spec, not a noninv schedule")
        options = {
            "d_max": spec.get("dmax"),
            "depth_mode": spec.get("depth"),
            "precision": spec.get("precision"),
            "stages": spec.get("stages"),
        }
        if spec.get("x0") is not None:
            options["x0"] = tuple(Fraction(v) for v in spec.get("x0"))
        if spec.get("multiplicity") is not None:
            options["multiplicity"] = tuple(spec.get("multiplicity"))
        return ConstructionSchedule(**{k: v for k, v in options.items() if v is not None})

    def build_system(self, spec: SystemSpec) -> NonInvertibleSystem:
        schedule = self.schedule(spec)
        system = NonInvertibleSystem(
            schedule,
            exact_cap=self.settings.exact_cap,
            stream_budget=self.settings.stream_budget,
            memory_limit=self.settings.stage_memory_bytes,
        )
        self.logger.info("Construction '%s': %d stage(s) laid out, x_%d materialized",
                         spec.label, len(system.records), system.materialized)
        return system
