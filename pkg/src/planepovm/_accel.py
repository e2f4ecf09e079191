"""Backend selection for the numeric kernels.

``PLANEPOVM_BACKEND=numpy`` forces the vectorized numpy path; the default
uses numba when it imports.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

HAVE_NUMBA = numba is not None
REQUESTED = os.environ.get("PLANEPOVM_BACKEND", "numba").strip().lower()
if REQUESTED not in ("numba", "numpy"):
    raise ImportError(f"PLANEPOVM_BACKEND must be 'numba' or 'numpy', got {REQUESTED!r}")
BACKEND = "numba" if (REQUESTED == "numba" and HAVE_NUMBA) else "numpy"


def njit(fn):
    if not HAVE_NUMBA:
        return fn
    return numba.njit(cache=True, fastmath=False)(fn)
