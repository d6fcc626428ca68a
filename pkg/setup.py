"""Build script for the optional compiled kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time); compiling it speeds up the Monte Carlo campaigns roughly 3-4x.
Build in place with:

    python setup.py build_ext --inplace
"""

import os

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    numpy_random_lib = os.path.join(os.path.dirname(numpy.__file__), "random", "lib")
    extensions = cythonize(
        [
            Extension(
                "wbsense.kernels._fast",
                ["src/wbsense/kernels/_fast.pyx"],
                include_dirs=[numpy.get_include()],
                library_dirs=[numpy_random_lib],
                libraries=["npyrandom"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=extensions)
