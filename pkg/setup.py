"""Build script: compiles the optional fast-kernel extension.

The package is fully functional without the extension (a vectorized numpy
fallback is selected at import time), so a failing C build only degrades
performance, never the install.
"""
import sys

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "davieskit.kernels._native",
                ["src/davieskit/kernels/_native.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    sys.stderr.write(f"davieskit: skipping compiled kernels ({exc})\n")

setup(ext_modules=ext_modules)
