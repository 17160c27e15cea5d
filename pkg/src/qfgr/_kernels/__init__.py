"""Kernel backend selection.

The compiled extension is preferred when present; setting QFGR_PURE_PYTHON=1
in the environment forces the numpy fallback.  Both backends expose the same
four functions and agree to numerical round-off (see tests/test_backends.py).
"""
import os

from . import pykernels

if os.environ.get("QFGR_PURE_PYTHON"):
    _impl = pykernels
else:
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = pykernels

BACKEND = _impl.BACKEND
kernel_weights = _impl.kernel_weights
build_rate_tensor = _impl.build_rate_tensor
rate_superoperator = _impl.rate_superoperator
double_commutator_superoperator = _impl.double_commutator_superoperator

__all__ = [
    "BACKEND",
    "kernel_weights",
    "build_rate_tensor",
    "rate_superoperator",
    "double_commutator_superoperator",
    "pykernels",
]
