"""Kernel dispatch: compiled extension when importable, numpy otherwise.

Set ``ESQ_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("ESQ_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

min_seg_dist = _impl.min_seg_dist
inside_polygon = _impl.inside_polygon
refine_constrained = _impl.refine_constrained
