import os

import numpy as np
from setuptools import Extension, setup

# PEEREVAL_NO_EXT=1 skips the compiled core; the package then runs on the
# numpy fallback selected in peereval._backend.
extensions = []
if not os.environ.get("PEEREVAL_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        extensions = cythonize(
            [
                Extension(
                    "peereval._kernels",
                    ["src/peereval/_kernels.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=extensions)
