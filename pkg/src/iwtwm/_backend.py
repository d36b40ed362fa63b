"""Kernel selection: compiled Cython module if importable, numpy fallback otherwise.

Set ``IWTWM_PURE=1`` to force the fallback.
"""
import os

from iwtwm import _pure

if os.environ.get("IWTWM_PURE"):
    kernels = _pure
    NAME = "python"
else:
    try:
        from iwtwm import _kernels as kernels
        NAME = "cython"
    except ImportError:
        kernels = _pure
        NAME = "python"
