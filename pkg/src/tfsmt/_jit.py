"""Numba switch.

Set ``TFSMT_DISABLE_JIT=1`` to run the pure numpy/Python kernels; they are
also used when numba is not importable.
"""

import os

_disabled = os.environ.get("TFSMT_DISABLE_JIT", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _disabled:
        raise ImportError
    import numba
except ImportError:
    numba = None

JIT_ENABLED = numba is not None

numba_default = {"nogil": True, "cache": True, "boundscheck": False}


def njit(fn):
    """Compile ``fn`` with numba when enabled; otherwise return ``None``."""
    if not JIT_ENABLED:
        return None
    return numba.njit(**numba_default)(fn)
