"""Build script for the optional compiled core.

The package works without the extension (a pure NumPy fallback is selected at
import time); building it makes filtration construction, boundary reduction
and Gram-matrix assembly fast enough for the full synthetic experiment.

    python setup.py build_ext --inplace
"""
import numpy as np
from setuptools import Extension, setup
from Cython.Build import cythonize

ext = Extension(
    "pdkernel._core._fast",
    ["src/pdkernel/_core/_fast.pyx"],
    include_dirs=[np.get_include()],
    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
)

setup(
    ext_modules=cythonize(
        [ext],
        annotate=False,
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    ),
)
