"""Pick the RK4 kernel at import time.

The compiled Cython kernel is used when it was built; set
``MSGATE_BACKEND=python`` to force the pure-Python fallback.
"""
import os

from . import _rk4_py

BACKEND = "python"
rk4_fourier = _rk4_py.rk4_fourier

if os.environ.get("MSGATE_BACKEND", "").lower() != "python":
    try:
        from ._rk4 import rk4_fourier  # noqa: F811
        BACKEND = "cython"
    except ImportError:
        pass


def compiled_kernel():
    """The compiled kernel, or None if the extension is not built."""
    try:
        from ._rk4 import rk4_fourier as fn
    except ImportError:
        return None
    return fn
