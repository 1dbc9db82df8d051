"""Build script: compiles the optional Cython kernels unless ABELQEC_SKIP_CYTHON=1."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("ABELQEC_SKIP_CYTHON", "0") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/abelqec/_kernels_cy.pyx"],
            language_level=3,
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        # Fall back to the pure-Python kernels; the package selects at import time.
        ext_modules = []

setup(ext_modules=ext_modules)
