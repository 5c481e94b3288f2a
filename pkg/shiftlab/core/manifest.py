"""
Run manifests: everything that determines a report.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from .exceptions import UsageError

SUBCOMMANDS = ("lang", "entropy", "predict", "noninv-build", "noninv-analyze", "partition", "markers")
OUTPUT_FORMATS = ("csv", "json")


@dataclass(frozen=True)
class RunManifest:
    """Spec, subcommand, parameters, output format, seed and tool version.

    Identical manifests produce byte-identical reports.
    """
    subcommand: str
    spec: Optional[str] = None
    params: Dict[str, Any] = field(default_factory=dict, hash=False)
    output_format: str = "csv"
    seed: int = 0
    version: str = ""

    def __post_init__(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"Unknown subcommand '{self.subcommand}'")
        if self.output_format not in OUTPUT_FORMATS:
            raise UsageError(f"Unknown output format '{self.output_format}'")
        if not self.version:
            from .. import __version__
            object.__setattr__(self, "version", __version__)

    def get(self, key: str, default: Any = None) -> Any:
        value = self.params.get(key)
        return default if value is None else value

    def require(self, key: str) -> Any:
        value = self.params.get(key)
        if value is None:
            raise UsageError(f"'{self.subcommand}' needs --{key.replace('_', '-')}")
        return value

    def to_provenance(self) -> Dict[str, Any]:
        return {
            "tool": "shiftlab",
            "version": self.version,
            "subcommand": self.subcommand,
            "spec": self.spec,
            "params": {k: v for k, v in sorted(self.params.items()) if v is not None},
            "format": self.output_format,
            "seed": self.seed,
        }
