"""Hot loops, compiled with numba unless ``EWITNESS_DISABLE_NUMBA`` is set.

Set ``EWITNESS_DISABLE_NUMBA=1`` before import to force the vectorized
NumPy path (also used automatically when numba is not importable).
"""
import os

_FALSY = {"", "0", "false", "no", "off"}


def _numba_requested():
    return os.environ.get("EWITNESS_DISABLE_NUMBA", "").strip().lower() in _FALSY


BACKEND = "numpy"
if _numba_requested():
    try:
        from . import numba_impl as _impl
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a declared dependency
        from . import numpy_impl as _impl
else:
    from . import numpy_impl as _impl

jacobi_eigh = _impl.jacobi_eigh
seesaw_restarts = _impl.seesaw_restarts
simplex_pgd = _impl.simplex_pgd
project_simplex = _impl.project_simplex

__all__ = ["BACKEND", "jacobi_eigh", "seesaw_restarts", "simplex_pgd", "project_simplex"]
