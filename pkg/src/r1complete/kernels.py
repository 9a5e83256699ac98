"""Backend dispatch for the graph kernels.

Two interchangeable implementations exist: numba-jitted (`_kernels_nb`) and
pure numpy/Python (`_kernels_py`).  The active one is chosen at import time
from the ``R1COMPLETE_BACKEND`` environment variable:

* ``auto`` (default) - use numba if it imports, else fall back to numpy;
* ``numba``          - require numba, fail loudly if unavailable;
* ``numpy``          - force the pure-Python fallback (numba never imported).

:func:`set_backend` switches at runtime (used by the benchmark and the
backend-parity tests).  Switching is a setup-time operation; do not call it
while estimations are running on other threads.
"""

import os
import warnings

_FUNCTIONS = (
    "components",
    "select_forest",
    "orient_forest",
    "tree_chain_into",
    "basis_matrix",
    "bfs_chain",
)

_ENV_VAR = "R1COMPLETE_BACKEND"
_impl = None
_impl_name = ""


def _load(name):
    if name == "numpy":
        from . import _kernels_py
        return _kernels_py
    if name == "numba":
        from . import _kernels_nb
        return _kernels_nb
    raise ValueError(f"unknown backend {name!r}; expected 'numba' or 'numpy'")


def set_backend(name):
    """Select the kernel implementation: 'numba', 'numpy' or 'auto'."""
    global _impl, _impl_name
    if name == "auto":
        try:
            _impl = _load("numba")
            _impl_name = "numba"
        except ImportError:
            warnings.warn("numba unavailable; using the pure numpy backend",
                          RuntimeWarning, stacklevel=2)
            _impl = _load("numpy")
            _impl_name = "numpy"
        return _impl_name
    _impl = _load(name)
    _impl_name = name
    return _impl_name


def get_backend():
    """Name of the active backend, 'numba' or 'numpy'."""
    return _impl_name


def __getattr__(name):
    if name in _FUNCTIONS:
        return getattr(_impl, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


set_backend(os.environ.get(_ENV_VAR, "auto"))
