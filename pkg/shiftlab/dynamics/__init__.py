"""
Symbolic dynamics: words, subshift oracles, prediction, entropy, the
non-invertible construction, partition entropy and marker families.
"""

from .subshifts import LanguageOracle, TransferGraph
from .words import SymbolStream, Word

__all__ = ["LanguageOracle", "TransferGraph", "SymbolStream", "Word"]
