"""Optional numba acceleration for the hot kernels.

Every hot kernel in this package exists twice: a scalar-loop version meant
for ``numba.njit`` and a vectorized pure-numpy twin.  Which one runs is
decided once, at import time:

* ``CASIFRIC_NUMBA=0`` (also ``off``/``false``/``numpy``) forces the numpy
  fallbacks even when numba is installed.
* otherwise numba is used if it imports, numpy fallbacks if it does not.

``benchmarks/bench_kernels.py`` times the two paths against each other.
"""

import os

_env = os.environ.get("CASIFRIC_NUMBA", "").strip().lower()

if _env in ("0", "off", "false", "no", "numpy"):
    NUMBA_ENABLED = False
    NUMBA_AVAILABLE = False
    try:
        import numba  # noqa: F401

        NUMBA_AVAILABLE = True
    except ImportError:
        pass
else:
    try:
        import numba  # noqa: F401

        NUMBA_ENABLED = True
        NUMBA_AVAILABLE = True
    except ImportError:
        NUMBA_ENABLED = False
        NUMBA_AVAILABLE = False


def njit(*args, **kwargs):
    """``numba.njit`` when enabled, identity decorator otherwise."""
    if NUMBA_ENABLED:
        from numba import njit as _njit

        return _njit(*args, **kwargs)
    if args and callable(args[0]):
        return args[0]
    return lambda f: f


def backend() -> str:
    """Name of the kernel backend selected at import time."""
    return "numba" if NUMBA_ENABLED else "numpy"
