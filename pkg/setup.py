"""Build script: compiles the optional pair-sampling extension.

The package works without the extension (a NumPy fallback is selected at
import time), so a failed compilation only costs speed, not correctness.
"""

import numpy as np
from setuptools import setup

try:
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    extensions = cythonize(
        [
            Extension(
                "dcsbm._core._pairs_cy",
                ["src/dcsbm/_core/_pairs_cy.pyx"],
                include_dirs=[np.get_include()],
                # -ffp-contract=off: the fallback and the extension must
                # produce bit-identical edge sets, so FMA contraction of the
                # probability product is forbidden.
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
