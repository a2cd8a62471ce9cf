import os

from setuptools import Extension, setup

# The compiled kernels are optional: XPAND_NO_EXT=1 (or a missing Cython)
# falls back to the pure-Python implementation in xpand._kernels_py.
ext_modules = []
if os.environ.get("XPAND_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "xpand._kernels_cy",
                    ["src/xpand/_kernels_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
