"""Build script: compiles the iteration-kernel extension when Cython is available.

The package works without the extension (infinifood._kernels falls back to the
pure-Python twin at import time), so a missing compiler or Cython only costs
speed, never functionality.  Set INFINIFOOD_NO_EXT=1 to skip the build.
"""

import os

from setuptools import Extension, setup


def _extensions():
    if os.environ.get("INFINIFOOD_NO_EXT"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "infinifood._kernels._native",
        ["src/infinifood/_kernels/_native.pyx"],
    )
    if os.name != "nt":
        # forbid FP contraction so the compiled kernels stay bit-compatible
        # with the pure-Python ones (same operation order, no fused multiply-add)
        ext.extra_compile_args = ["-O3", "-ffp-contract=off"]
    return cythonize([ext], language_level="3")


setup(ext_modules=_extensions())
