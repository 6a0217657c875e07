"""Pick the kernel implementation at import time.

The compiled ``_ckernels`` extension is used when it has been built; set
``CUBESECT_PURE_PYTHON=1`` to force the numpy fallback.
"""

import importlib
import os

from . import _pykernels


def load(name=None):
    """Return the kernel module called ``name`` ("cython" or "python"), or
    the preferred available one when ``name`` is None."""
    if name == "python":
        return _pykernels
    if name == "cython":
        return importlib.import_module("cubesect._ckernels")
    if os.environ.get("CUBESECT_PURE_PYTHON", "") not in ("", "0"):
        return _pykernels
    try:
        return importlib.import_module("cubesect._ckernels")
    except ImportError:
        return _pykernels


kernels = load()
BACKEND = "python" if kernels is _pykernels else "cython"
