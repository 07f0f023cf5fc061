"""Select the simplex kernel: compiled if importable, else pure Python.

Set ``QSTNOISE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernel_py

kernel = _kernel_py
NAME = "python"

if os.environ.get("QSTNOISE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernel as _compiled
    except ImportError:
        pass
    else:
        kernel = _compiled
        NAME = "cython"


def get_kernel(name=None):
    """Return a kernel module by name (``"cython"`` or ``"python"``), or the active one."""
    if name is None:
        return kernel
    if name == "python":
        return _kernel_py
    if name == "cython":
        from . import _kernel

        return _kernel
    raise ValueError(f"unknown kernel backend {name!r}")
