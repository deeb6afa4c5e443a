"""Build script: compiles the alignment kernel extension when Cython and a C
compiler are available, otherwise falls back to a pure-Python build (the
package selects the backend at import time)."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("SSTEVAL_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/ssteval/_kernels/_align_cy.pyx"],
            language_level=3,
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
