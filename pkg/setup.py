"""Build script: compiles the closure-engine extension when Cython and a
C toolchain are available; the package falls back to the pure-Python
engine otherwise, so the build must never hard-fail on the extension."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/epiplan/engine/_engine_c.pyx"],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
