"""Iteration kernels: compiled core with a pure-Python fallback.

The compiled module is built from _native.pyx at install time.  If the
extension is missing (no compiler, no Cython) the pure twin takes over with
identical semantics.  Set INFINIFOOD_PURE=1 in the environment to force the
fallback; benchmarks/bench_kernels.py imports both sides explicitly to
measure the gap.
"""

import os

if os.environ.get("INFINIFOOD_PURE"):
    from . import _pure as _impl
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _pure as _impl

#: which implementation is active: "native" or "pure"
BACKEND: str = _impl.BACKEND

w_iterate = _impl.w_iterate
oreo_orbit = _impl.oreo_orbit
pair_orbit = _impl.pair_orbit
affine_sweeps = _impl.affine_sweeps

__all__ = ["BACKEND", "w_iterate", "oreo_orbit", "pair_orbit", "affine_sweeps"]
