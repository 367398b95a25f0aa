"""JIT switch shared by the hot kernels.

Set ``IDSOLVE_NUMBA=0`` to run the pure numpy/interpreted fallbacks instead of
numba-compiled code. The flag is read once at import time.
"""

import os

_FLAG = os.environ.get("IDSOLVE_NUMBA", "1").strip().lower()
USE_NUMBA = _FLAG not in ("0", "false", "no", "off")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover - numba is a declared dependency
        USE_NUMBA = False

if not USE_NUMBA:

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def wrap(func):
            return func

        return wrap


__all__ = ["USE_NUMBA", "njit"]
