"""``njit`` that degrades to plain Python.

Set ``RENACOUNT_DISABLE_NUMBA=1`` (or run without numba installed) to get
the pure NumPy path; the kernels are written so both paths give identical
results.
"""

import os

DISABLED = os.environ.get("RENACOUNT_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    from numba import njit as _numba_njit
except ImportError:  # pragma: no cover
    _numba_njit = None

USING_NUMBA = _numba_njit is not None and not DISABLED


def njit(*args, **kwargs):
    if USING_NUMBA:
        kwargs.setdefault("cache", True)
        return _numba_njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f


def python_impl(func):
    """The uncompiled function behind a kernel (itself on the fallback path)."""
    return getattr(func, "py_func", func)
