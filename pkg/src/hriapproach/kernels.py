"""Backend selection for the grid kernels.

The compiled extension is used when it was built; set
``HRIAPPROACH_PURE_PYTHON=1`` to force the numpy fallback.
"""

from __future__ import annotations

import os

from hriapproach import _pykernels

if os.environ.get("HRIAPPROACH_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from hriapproach import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

wavefront = _impl.wavefront
astar = _impl.astar


def available_backends() -> dict:
    """All importable kernel modules keyed by name."""
    found = {"python": _pykernels}
    try:
        from hriapproach import _ckernels
        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
