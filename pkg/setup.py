import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "persuade._kernels",
                ["src/persuade/_kernels.pyx"],
                extra_compile_args=["-O3"],
                include_dirs=[numpy.get_include()],
            )
        ],
        language_level=3,
    )
except ImportError:
    # pure-python fallback is selected at import time when the
    # extension is missing, so a build without Cython still works
    ext_modules = []

setup(ext_modules=ext_modules)
