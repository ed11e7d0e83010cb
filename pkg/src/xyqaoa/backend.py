"""Kernel backend selection.

Set XYQAOA_BACKEND=numpy to force the pure-numpy kernels; the default is
the numba-jitted set, falling back to numpy if numba is unavailable. The
choice is resolved once, at first use.
"""

import os

ENV_VAR = "XYQAOA_BACKEND"

_kernels = None


def kernels():
    """Return the active kernel module."""
    global _kernels
    if _kernels is None:
        _kernels = _load(os.environ.get(ENV_VAR, "numba").strip().lower())
    return _kernels


def backend_name():
    return kernels().BACKEND_NAME


def _load(name):
    if name == "numpy":
        from . import _kernels_numpy
        return _kernels_numpy
    if name == "numba":
        try:
            from . import _kernels_numba
            return _kernels_numba
        except ImportError:
            from . import _kernels_numpy
            return _kernels_numpy
    raise ValueError(
        f"unknown backend {name!r} in ${ENV_VAR}: expected 'numba' or 'numpy'"
    )
