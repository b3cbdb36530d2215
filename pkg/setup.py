"""Build script for the optional compiled union-find kernel.

The extension is optional: when Cython is missing or the compiler fails,
the package installs without it and ``aida.unionfind`` falls back to the
pure-Python kernel.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - build-time only
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("aida._unionfind", ["src/aida/_unionfind.pyx"], optional=True)],
        compiler_directives={"language_level": 3, "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=ext_modules)
