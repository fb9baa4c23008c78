"""Numba switch for the hot kernels.

Set ``FRAGWORDS_DISABLE_NUMBA=1`` to run every kernel as plain Python over
numpy arrays. The flag is read once, at import time.
"""

import os

_DISABLED = os.environ.get("FRAGWORDS_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError
    import numba as _numba
except ImportError:
    _numba = None

USE_NUMBA = _numba is not None


def jit(func):
    """Compile ``func`` with ``numba.njit`` when enabled, else return it unchanged.

    The uncompiled function stays reachable as ``.py_func`` in both modes so
    the benchmark can time the two paths side by side.
    """
    if USE_NUMBA:
        return _numba.njit(cache=True)(func)
    func.py_func = func
    return func
