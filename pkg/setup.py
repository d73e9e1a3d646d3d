"""Build script for the optional compiled Numerov core.

The extension is optional: if Cython or a C compiler is unavailable the
package installs without it and falls back to the pure-Python kernels.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("KGYUKAWA_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "kgyukawa._numerov_core",
                    ["src/kgyukawa/_numerov_core.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
