"""Hull kernel selection.

The compiled ``_ckernels`` extension is used when it was built; otherwise, or
when ``CONVEXTERM_PURE_PYTHON=1`` is set, the pure-Python kernels are used.
Both return identical results.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("CONVEXTERM_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

hull2d = _impl.hull2d
hull3d = _impl.hull3d
orient2d = _pykernels.orient2d
orient3d = _pykernels.orient3d


def backends():
    """All importable kernel modules, keyed by name (for tests and benchmarks)."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
