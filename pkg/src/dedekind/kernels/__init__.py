"""Hot loops behind a single surface.

The compiled implementations live in ``_nb`` and the numpy fallback in
``_np``; which one is bound here is decided once at import time by
:mod:`dedekind._backend`. Both modules can be imported directly for
side-by-side comparison.
"""
import numpy as np

from .._backend import HAVE_NUMBA, backend_name

if HAVE_NUMBA:
    from . import _nb as _impl
else:
    from . import _np as _impl

permute_values = _impl.permute_values
orbit_sweep = _impl.orbit_sweep
down_split = _impl.down_split
up3_table = _impl.up3_table
up4_table = _impl.up4_table
h_rep_sums = _impl.h_rep_sums
h_buckets = _impl.h_buckets
f_pair_sums = _impl.f_pair_sums
g_rep_sums = _impl.g_rep_sums

BACKEND = backend_name()


def multiset_offsets(size: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Offsets ranking sorted tuples ``i <= j <= k <= l`` of ``range(size)``.

    The rank of ``(i, j)`` is ``i + C2[j]``, of ``(i, j, k)`` is
    ``i + C2[j] + C3[k]`` and so on (combinatorial number system on the
    shifted strictly increasing tuple).
    """
    r = np.arange(size, dtype=np.int64)
    c2 = (r + 1) * r // 2
    c3 = (r + 2) * (r + 1) * r // 6
    c4 = (r + 3) * (r + 2) * (r + 1) * r // 24
    return c2, c3, c4


__all__ = [
    "BACKEND",
    "down_split",
    "f_pair_sums",
    "g_rep_sums",
    "h_buckets",
    "h_rep_sums",
    "multiset_offsets",
    "orbit_sweep",
    "permute_values",
    "up3_table",
    "up4_table",
]
