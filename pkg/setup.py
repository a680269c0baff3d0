"""Build script: compiles the optional Cython propagation kernel.

The extension is marked optional, so a missing compiler (or a failed
cythonize) degrades to the pure-Python kernel instead of breaking the
install.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "chirptls._kernels._native",
                ["src/chirptls/_kernels/_native.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
