"""Kernel backend selection.

The compiled extension is used when it was built; otherwise the numpy
fallback is loaded. Set ``REPBENCH_PURE_PYTHON=1`` to force the fallback.
"""

import os

from repbench import _pykernels

if os.environ.get("REPBENCH_PURE_PYTHON", "") not in ("", "0"):
    _compiled = None
else:
    try:
        from repbench import _ckernels as _compiled
    except ImportError:
        _compiled = None

kernels = _compiled if _compiled is not None else _pykernels
COMPILED = _compiled is not None
name = "cython" if COMPILED else "python"


def use(backend: str) -> None:
    """Switch the active backend at runtime ("cython" or "python")."""
    global kernels, name
    if backend == "python":
        kernels = _pykernels
    elif backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        kernels = _compiled
    else:
        raise ValueError(f"unknown backend {backend!r}")
    name = backend
