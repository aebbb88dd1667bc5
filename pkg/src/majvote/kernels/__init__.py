"""Backend selection for the hot loops.

The numba kernels are used when numba imports cleanly.  Setting
``MAJVOTE_BACKEND=numpy`` forces the pure-numpy path; both expose
``step``, ``voting_time``, ``count_bad_arrows`` and ``worst_case_range``.
"""
import os

from . import numpy_kernels

_requested = os.environ.get("MAJVOTE_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"MAJVOTE_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

_impl = numpy_kernels
if _requested == "numba":
    try:
        import importlib

        _impl = importlib.import_module(".numba_kernels", __name__)
    except ImportError:  # pragma: no cover - numba missing
        pass
BACKEND = "numba" if _impl is not numpy_kernels else "numpy"

step = _impl.step
voting_time = _impl.voting_time
count_bad_arrows = _impl.count_bad_arrows
worst_case_range = _impl.worst_case_range


def available_backends():
    names = ["numpy"]
    try:
        get_backend("numba")
    except ImportError:  # pragma: no cover
        return names
    return ["numba"] + names


def get_backend(name):
    """Return the kernel module for ``name`` regardless of the env flag."""
    if name == "numpy":
        return numpy_kernels
    if name == "numba":
        import importlib

        return importlib.import_module(".numba_kernels", __name__)
    raise ValueError(f"unknown backend {name!r}")
