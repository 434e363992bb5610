"""Numba switch.

Set ``TOMOINFO_NO_NUMBA=1`` to force the pure-numpy kernels. The flag is read
once at import time.
"""

import functools
import os

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAS_NUMBA = False

_DISABLED = os.environ.get("TOMOINFO_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}
USE_NUMBA = HAS_NUMBA and not _DISABLED


def njit(func):
    """Compile ``func`` with numba when available, otherwise return it as is."""
    if not HAS_NUMBA:
        return func
    return functools.partial(numba.njit, cache=False, nogil=True)(func)


def select(jitted, fallback):
    """Pick the active implementation of a kernel pair."""
    return jitted if USE_NUMBA else fallback
