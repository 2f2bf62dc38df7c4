"""Numba switch.

Kernels decorated with :func:`njit` are compiled by numba unless the
environment variable ``PMEFRONT_DISABLE_NUMBA`` is set to a truthy value
(or numba is not importable), in which case they run as plain Python and
the vectorised numpy paths are preferred where one exists.
"""

import os

_FLAG = os.environ.get("PMEFRONT_DISABLE_NUMBA", "").strip().lower()

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

USE_NUMBA = numba is not None and _FLAG not in ("1", "true", "yes", "on")


def njit(*args, **options):
    """``numba.njit`` when enabled, otherwise an identity decorator."""
    if USE_NUMBA:
        options.setdefault("cache", True)
        return numba.njit(*args, **options)
    if len(args) == 1 and callable(args[0]) and not options:
        return args[0]

    def decorate(func):
        return func

    return decorate
