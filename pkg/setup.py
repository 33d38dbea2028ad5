"""Build script: compiles the recurrence kernels to a C extension when
Cython is available.  The package works without the extension (a pure
Python implementation of the same kernels is selected at import time),
so any build failure here is deliberately non-fatal.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/cyclores/_kernels_cy.pyx",
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
    for ext in ext_modules:
        ext.extra_compile_args = ["-O3"]
except ImportError:
    pass

setup(ext_modules=ext_modules)
