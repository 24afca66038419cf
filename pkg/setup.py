"""Build script: compiles the optional cut-evaluation kernel.

The package works without the extension (a numpy fallback is selected at
import time), so the extension is marked optional and a failed compile is
not fatal.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "cutbal.kernels._ckern",
                ["src/cutbal/kernels/_ckern.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
