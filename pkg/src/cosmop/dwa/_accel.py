"""Kernel backend selection.

Numba-compiled kernels are used when numba imports cleanly, unless
``COSMOP_DISABLE_NUMBA`` is set to a truthy value, in which case the
vectorised numpy kernels run instead.  Both produce the same numbers.
"""

from __future__ import annotations

import os


def numba_requested() -> bool:
    return os.environ.get("COSMOP_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes", "on")


def load_kernels(use_numba: bool | None = None):
    """Kernel module for the requested backend (falls back to numpy)."""
    if use_numba is None:
        use_numba = numba_requested()
    if use_numba:
        try:
            from cosmop.dwa import kernels_numba
            return kernels_numba
        except ImportError:  # numba missing or broken on this platform
            pass
    from cosmop.dwa import kernels_numpy
    return kernels_numpy
