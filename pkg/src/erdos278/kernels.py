"""Kernel selection.

The compiled extension is used when it imports; otherwise the pure-Python
fallback.  Set ``ERDOS278_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _fallback

try:
    if os.environ.get("ERDOS278_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-Python kernels forced by environment")
    from . import _ckernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _fallback
    BACKEND = "python"

count_uncovered = _impl.count_uncovered
residue_extrema = _impl.residue_extrema

__all__ = ["BACKEND", "count_uncovered", "residue_extrema"]
