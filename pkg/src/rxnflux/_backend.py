"""Kernel backend selection.

The hot simulation kernels in :mod:`rxnflux._kernels` are written once and
compiled with numba's ``@njit`` when available.  Setting the environment
variable ``RXNFLUX_BACKEND=python`` before import skips compilation and runs
the identical source as plain Python over numpy scalars; results are
bit-for-bit the same (all kernel arithmetic is uint64/float64 with wrapping
semantics in both modes).  ``RXNFLUX_BACKEND=numba`` makes a missing numba
installation a hard error instead of a silent fallback.
"""

import os

_choice = os.environ.get("RXNFLUX_BACKEND", "auto").strip().lower() or "auto"

if _choice in ("auto", "numba"):
    try:
        from numba import njit

        BACKEND = "numba"
    except ImportError:
        if _choice == "numba":
            raise ImportError(
                "RXNFLUX_BACKEND=numba was requested but numba is not importable"
            )
        BACKEND = "python"
elif _choice in ("python", "numpy"):
    BACKEND = "python"
else:
    raise ValueError(
        f"unknown RXNFLUX_BACKEND value {_choice!r}; use 'numba' or 'python'"
    )

if BACKEND == "python":

    def njit(*args, **kwargs):
        """No-op stand-in for numba.njit: return the function unchanged."""
        if args and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap
