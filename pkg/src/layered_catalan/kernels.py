"""Kernel dispatch: the compiled extension when importable, else pure Python.

Set ``LCN_KERNELS=python`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
arena_union_find = _pykernels.arena_union_find
det_mod_p = _pykernels.det_mod_p

if os.environ.get("LCN_KERNELS", "").lower() != "python":
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "cython"
        arena_union_find = _ckernels.arena_union_find
        det_mod_p = _ckernels.det_mod_p

__all__ = ["BACKEND", "arena_union_find", "det_mod_p"]
