"""Build script: compiles the fast kernels when Cython is available.

Without Cython the package still installs; the pure-Python kernels are
selected automatically at import time.
"""
import os

from setuptools import Extension, setup

PYX = "src/cuckoopeel/_core_c.pyx"

ext_modules = []
if os.environ.get("CUCKOOPEEL_SKIP_EXT") != "1" and os.path.exists(PYX):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("cuckoopeel._core_c", [PYX])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
