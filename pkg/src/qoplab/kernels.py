"""Backend selection for the sector kernels.

The compiled extension is used when it imports; ``QOPLAB_PURE_PYTHON=1``
forces the numpy fallback.  ``BACKEND`` names the active choice.
"""
from __future__ import annotations

import os

from . import _kernels_py

_force_pure = os.environ.get("QOPLAB_PURE_PYTHON", "") not in ("", "0")

if _force_pure:
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

sector_traces = _impl.sector_traces
laurent_chain = _impl.laurent_chain

__all__ = ["BACKEND", "sector_traces", "laurent_chain"]
