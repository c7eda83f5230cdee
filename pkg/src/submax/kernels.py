"""Kernel selection: compiled extension if importable, pure Python otherwise.

Set SUBMAX_PURE_PYTHON=1 to force the pure path (used by the parity tests
and the kernel benchmark).
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("SUBMAX_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _kernels_py

HAVE_COMPILED = bool(getattr(_impl, "COMPILED", False))

CoverageKernel = _impl.CoverageKernel
FacilityKernel = _impl.FacilityKernel
MixKernel = _impl.MixKernel
# the modular kernel is O(1) arithmetic; the pure version is always used
ModularKernel = _kernels_py.ModularKernel


def implementation_name() -> str:
    return "compiled" if HAVE_COMPILED else "pure-python"
