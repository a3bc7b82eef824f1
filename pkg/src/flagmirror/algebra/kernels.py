"""Kernel selection: the compiled extension when built, pure Python otherwise.

Set ``FLAGMIRROR_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

bias_key = _pykernels.bias_key
weighted_degree = _pykernels.weighted_degree
FIELD = _pykernels.FIELD
MASK = _pykernels.MASK
BIAS = _pykernels.BIAS

BACKEND = "python"
mul_trunc = _pykernels.mul_trunc
divided_difference = _pykernels.divided_difference

if not os.environ.get("FLAGMIRROR_PURE_PYTHON"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        mul_trunc = _ckernels.mul_trunc
        divided_difference = _ckernels.divided_difference
        BACKEND = "cython"
