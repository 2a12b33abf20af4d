"""Kernel backend selection.

The compiled extension is preferred; the pure-Python module is the
fallback. Set ``LOCOKIT_PURE_PYTHON=1`` to force the fallback (used by the
benchmark and the parity tests).
"""
import os

if os.environ.get("LOCOKIT_PURE_PYTHON") == "1":
    from . import _kernels_py as impl
else:
    try:
        from . import _kernels as impl  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as impl  # type: ignore[no-redef]


def backend_name() -> str:
    return impl.BACKEND_NAME
