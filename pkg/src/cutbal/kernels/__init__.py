"""Batch cut-evaluation kernels with backend selection at import time.

The compiled Cython backend is used when available; otherwise the numpy
fallback takes over.  Set CUTBAL_KERNEL=python to force the fallback.
Both backends return identical values (same summation order).
"""

import os

from . import _pykern

if os.environ.get("CUTBAL_KERNEL") == "python":
    _impl = _pykern
    BACKEND = "python"
else:
    try:
        from . import _ckern as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _pykern
        BACKEND = "python"

cut_weights = _impl.cut_weights
cut_counts = _impl.cut_counts
mask_sums = _impl.mask_sums

__all__ = ["cut_weights", "cut_counts", "mask_sums", "BACKEND"]
