"""Kernel backend selection.

The compiled extension is used when it imports; set ``NETCODE_PURE_PYTHON=1``
to force the pure-Python fallback.
"""

import os

from . import _kernels_py

if os.environ.get("NETCODE_PURE_PYTHON", "") not in ("", "0"):
    backend = _kernels_py
else:
    try:
        from . import _kernels as backend  # type: ignore[no-redef]
    except ImportError:  # extension not built
        backend = _kernels_py

BACKEND_NAME = "compiled" if backend is not _kernels_py else "python"


def available_backends():
    out = {"python": _kernels_py}
    try:
        from . import _kernels

        out["compiled"] = _kernels
    except ImportError:
        pass
    return out
