"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
implementation takes over. Set ``SHIFTAUT_PURE_PYTHON=1`` to force the
fallback.
"""

import os

from . import _pykernels

if os.environ.get("SHIFTAUT_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

lookup_rows = _impl.lookup_rows
match_placements = _impl.match_placements
overlap_free = _impl.overlap_free
belt_walk = _impl.belt_walk
orbit_labels = _impl.orbit_labels

TOP = _pykernels.TOP
BOTTOM = _pykernels.BOTTOM


def backends() -> dict:
    """All importable implementations, keyed by name (used by tests and the benchmark)."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels  # type: ignore[attr-defined]

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
