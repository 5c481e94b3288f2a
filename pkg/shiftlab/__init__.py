"""
shiftlab

A symbolic-dynamics workbench: subshift languages, entropy and prediction
analysis, and a generator/analyzer for an everywhere non-invertible
zero-entropy system on [0,1]^N.
"""

__version__ = "1.0.0"

from .core.exceptions import ShiftLabError

__all__ = ["ShiftLabError", "__version__"]
