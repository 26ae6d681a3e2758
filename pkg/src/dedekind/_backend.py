"""Selection between the numba-compiled kernels and the pure numpy fallback.

Set ``DEDEKIND_NO_NUMBA=1`` to force the numpy path. The numpy path is also used
when numba cannot be imported.
"""
import os
import warnings

_DISABLED = os.environ.get("DEDEKIND_NO_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by DEDEKIND_NO_NUMBA")
    import numba  # noqa: F401

    # numba falls back to another threading layer when TBB is too old
    warnings.filterwarnings("ignore", message=".*TBB threading layer.*")
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


def backend_name() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


def set_threads(threads: int) -> int:
    """Size the numba worker pool; 0 means all available. Returns the count in use."""
    if not HAVE_NUMBA:
        return 1
    import numba

    limit = numba.config.NUMBA_NUM_THREADS
    count = limit if threads <= 0 else min(threads, limit)
    numba.set_num_threads(count)
    return count
