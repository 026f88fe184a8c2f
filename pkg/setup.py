"""Build script for the optional compiled simplex kernel.

The package is fully functional without the extension (a numpy fallback is
selected at import time); building it just makes the LP pivot loop fast.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "unfalsify.solvers._simplex_cy",
                ["src/unfalsify/solvers/_simplex_cy.pyx"],
                # -ffp-contract=off keeps the pivot arithmetic bit-identical
                # to the numpy fallback (no FMA contraction).
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    ext_modules = []

setup(ext_modules=ext_modules)
