"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python kernel module is
selected at import time); set LOCOKIT_NO_EXT=1 to skip compilation.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("LOCOKIT_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "locokit.kindyn._kernels",
                    ["src/locokit/kindyn/_kernels.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
