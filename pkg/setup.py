"""Builds the optional compiled kernels; the package also runs without them."""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("TROPELL_PURE_PYTHON") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("tropell._kernels", ["src/tropell/_kernels.pyx"], extra_compile_args=["-O2"])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
