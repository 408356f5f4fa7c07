"""Backend selection for the compiled kernels.

Set ``CHANGKIT_DISABLE_NUMBA=1`` to force the pure-numpy code paths.
"""

import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
NUMBA_DISABLED = os.environ.get("CHANGKIT_DISABLE_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
    "on",
}
USE_NUMBA = HAVE_NUMBA and not NUMBA_DISABLED


def njit(func):
    """Compile ``func`` in nopython mode, or return None if numba is missing."""
    if not HAVE_NUMBA:
        return None
    return numba.njit(cache=True)(func)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
