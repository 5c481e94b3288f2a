"""
Core components: error hierarchy, run manifests and the workbench.

``Workbench`` and ``WorkbenchFactory`` live in their own modules and are
imported from there, since the dynamics layer depends on this package.
"""

from .exceptions import ShiftLabError
from .manifest import RunManifest

__all__ = ["ShiftLabError", "RunManifest"]
