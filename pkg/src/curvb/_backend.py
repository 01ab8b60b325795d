"""Kernel backend selection.

Hot kernels are compiled with numba when it is importable; setting
CURVB_BACKEND=numpy forces the vectorized pure-numpy implementations
instead.  The flag is read once at import time so that a process uses
one backend consistently.
"""

import os

_VALID = ("numba", "numpy")

_requested = os.environ.get("CURVB_BACKEND", "numba").strip().lower()
if _requested not in _VALID:
    raise RuntimeError(
        f"CURVB_BACKEND must be one of {_VALID}, got {_requested!r}"
    )

USING_NUMBA = False
if _requested == "numba":
    try:
        import numba  # noqa: F401

        USING_NUMBA = True
    except ImportError:
        USING_NUMBA = False

BACKEND = "numba" if USING_NUMBA else "numpy"


def jit(func):
    """Apply numba.njit when the numba backend is active, else no-op.

    fastmath stays off: interval arithmetic relies on IEEE semantics.
    """
    if USING_NUMBA:
        import numba

        return numba.njit(cache=True, nogil=True)(func)
    return func
