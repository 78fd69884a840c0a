"""Backend selection for the neighbor-search hot kernels.

Two interchangeable implementations of the brute-force max-norm primitives
exist: a numba-jitted one (default when numba imports) and a pure-numpy
one. Both return bit-identical results; the numpy path is selected by
setting the environment variable ``REDTE_NUMBA=0`` before import, or
automatically when numba is unavailable.
"""

import os

_flag = os.environ.get("REDTE_NUMBA", "1").strip().lower()
_want_numba = _flag not in ("0", "false", "no", "off")

if _want_numba:
    try:
        from ._numba_impl import (
            ksg_counts_brute,
            kth_radius_brute,
            strict_counts_brute,
        )

        BACKEND = "numba"
    except ImportError:
        from ._numpy_impl import (
            ksg_counts_brute,
            kth_radius_brute,
            strict_counts_brute,
        )

        BACKEND = "numpy"
else:
    from ._numpy_impl import ksg_counts_brute, kth_radius_brute, strict_counts_brute

    BACKEND = "numpy"

__all__ = ["BACKEND", "ksg_counts_brute", "kth_radius_brute", "strict_counts_brute"]
