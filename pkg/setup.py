"""Build the optional Cython tick kernel.

The package works without it; ``sarswarm.simulation`` falls back to the
pure-Python step when the extension cannot be imported.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "sarswarm._kernel",
                ["src/sarswarm/_kernel.pyx"],
                # bit-identical results with the Python fallback need plain IEEE arithmetic
                extra_compile_args=["-O3", "-ffp-contract=off", "-fno-fast-math"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
