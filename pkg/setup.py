"""Build script: compiles the MCMC kernel extension when Cython and a C
compiler are available, otherwise installs the pure-Python fallback only."""

from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "blindinv._kernels",
                ["src/blindinv/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception:
    extensions = []

setup(ext_modules=extensions)
