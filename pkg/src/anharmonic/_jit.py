"""Optional numba acceleration.

Importing `njit` from here instead of numba keeps the package importable
when numba is missing: the kernels then run as plain Python functions with
identical semantics (they are written in the numba-supported subset).
Set NUMBA_DISABLE_JIT=1 to force interpreted execution with numba installed.
"""

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap
