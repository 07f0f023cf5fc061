"""Build the optional compiled kernel; the package works without it."""
import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("QSTNOISE_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext = Extension(
            "qstnoise._kernel",
            ["src/qstnoise/_kernel.pyx"],
            # no fused multiply-add: keeps results bit-identical to the Python fallback
            extra_compile_args=["-O2", "-ffp-contract=off"],
            optional=True,
        )
        ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})

setup(ext_modules=ext_modules)
