import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "qfgr._kernels._ckernels",
                ["src/qfgr/_kernels/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Cython unavailable: install the pure-python package; the _kernels
    # package falls back to the numpy implementation at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
