"""Select the compiled kernels when available, else the pure-Python ones.

Set ALCOVE_PIECES_PURE=1 to force the fallback.
"""
import os

if os.environ.get("ALCOVE_PIECES_PURE"):
    from ._pykernels import act, im_length, mul
    BACKEND = "python"
else:
    try:
        from ._kernels import act, im_length, mul
        BACKEND = "cython"
    except ImportError:
        from ._pykernels import act, im_length, mul
        BACKEND = "python"

__all__ = ["act", "im_length", "mul", "BACKEND"]
