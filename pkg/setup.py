import os

from setuptools import setup

ext_modules = []
if not os.environ.get("HURWITZ_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "hurwitz._kernels._fast",
                    ["src/hurwitz/_kernels/_fast.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython/numpy at build time: fall back to the pure-Python kernels.
        ext_modules = []

setup(ext_modules=ext_modules)
