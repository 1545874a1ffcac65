"""Kernel dispatch: the compiled extension when built, else pure Python.

Set ``TROPELL_PURE_PYTHON=1`` to force the fallback.
"""

import os

from tropell import _kernels_py

BACKEND = "python"

if not os.environ.get("TROPELL_PURE_PYTHON"):
    try:
        from tropell import _kernels as _impl
    except ImportError:
        _impl = _kernels_py
    else:
        BACKEND = "cython"
else:
    _impl = _kernels_py

convolve = _impl.convolve
lower_faces = _impl.lower_faces
inverse_series = _impl.inverse_series

__all__ = ["BACKEND", "convolve", "inverse_series", "lower_faces"]
