"""Optional numba acceleration.

Set ``ABWIRE_DISABLE_NUMBA=1`` (or run without numba installed) to use the
pure-numpy kernels instead of the compiled ones.
"""
import os

USE_NUMBA = os.environ.get("ABWIRE_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:
    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]

        def decorate(func):
            return func
        return decorate
