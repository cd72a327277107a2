import os

from setuptools import setup

ext_modules = []
if not os.environ.get("GR1PERF_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            ["src/gr1perf/symcore/_kernel.pyx"],
            compiler_directives={"language_level": "3"},
        )
        for ext in ext_modules:
            ext.extra_compile_args = ["-O3", "-std=c++17"]

setup(ext_modules=ext_modules)
