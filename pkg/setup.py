"""Build script: compiles the Cython enumeration kernel when Cython and a C
compiler are available; the package falls back to the pure-Python kernel
otherwise, so a failed extension build is not fatal."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/starvlc/_kernels/_gray_cy.pyx",
        compiler_directives={"language_level": 3},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
