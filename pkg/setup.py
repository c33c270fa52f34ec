from Cython.Build import cythonize
from setuptools import Extension, setup

setup(
    ext_modules=cythonize(
        [Extension("brdyn._kernels", ["src/brdyn/_kernels.pyx"], extra_compile_args=["-O3"])],
        language_level=3,
    ),
)
