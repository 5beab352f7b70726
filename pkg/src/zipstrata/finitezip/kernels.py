"""Kernel selection: the compiled extension when importable, numpy otherwise.

Set ``ZIPSTRATA_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("ZIPSTRATA_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _kernels_py

IMPLEMENTATION: str = _impl.IMPLEMENTATION
transform_codes = _impl.transform_codes
v_reduce = _impl.v_reduce
components = _impl.components

__all__ = ["IMPLEMENTATION", "transform_codes", "v_reduce", "components", "implementations"]


def implementations() -> dict:
    """Every importable backend keyed by name, for benchmarking and cross-checks."""
    out = {"python": _kernels_py}
    try:
        from . import _ckernels  # type: ignore[attr-defined]

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
