"""Numeric kernel backend, chosen once at import.

The compiled extension is used when it was built; otherwise the numpy
versions take over. Set ``CHARVAR_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("CHARVAR_PURE", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

eval_poly_batch = _impl.eval_poly_batch
word_eval_batch = _impl.word_eval_batch

__all__ = ["BACKEND", "eval_poly_batch", "word_eval_batch"]
