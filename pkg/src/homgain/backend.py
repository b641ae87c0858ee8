"""Numba/numpy backend selection.

Hot kernels in :mod:`homgain._kernels` are JIT-compiled with numba by default.
Setting the environment variable ``HOMGAIN_DISABLE_NUMBA=1`` (or any of
``true``/``yes``) before import selects the pure-numpy fallback path; the same
happens automatically when numba is not importable.  ``benchmarks/`` contains a
script comparing the two paths.
"""

import os

_FLAG = os.environ.get("HOMGAIN_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _FLAG in ("1", "true", "yes")

NUMBA_ENABLED = False

if not _DISABLED:
    try:
        from numba import njit, prange  # noqa: F401

        NUMBA_ENABLED = True
    except ImportError:
        pass

if not NUMBA_ENABLED:
    def njit(*args, **kwargs):  # noqa: D103 - identity decorator fallback
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def deco(fn):
            return fn

        return deco

    prange = range


def set_threads(n: int) -> None:
    """Limit numba's thread pool; no-op on the numpy fallback."""
    if NUMBA_ENABLED and n > 0:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
