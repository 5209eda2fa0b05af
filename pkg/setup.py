import os

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("BETAFREQ_NO_EXTENSION"):
    ext_modules = cythonize(
        [Extension("betafreq._kernels", ["src/betafreq/_kernels.pyx"],
                   include_dirs=[numpy.get_include()], extra_compile_args=["-O3"])],
        language_level=3,
    )

setup(ext_modules=ext_modules)
