"""Builds the optional compiled kernels. Without Cython or a C compiler the
package still installs and runs on the pure-Python fallback."""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("EPDUAL_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("epdual._kernels._ckernels", ["src/epdual/_kernels/_ckernels.pyx"],
                       extra_compile_args=["-O3"])],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)
