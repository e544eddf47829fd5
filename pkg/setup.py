import os

import numpy as np
from setuptools import Extension, setup

# MINLAB_PURE=1 skips the compiled kernels; the package then runs on the
# pure-numpy fallback selected at import time.
if os.environ.get("MINLAB_PURE"):
    ext_modules = []
else:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "minlab._ckern",
                ["src/minlab/_ckern.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
