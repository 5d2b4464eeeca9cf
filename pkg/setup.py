"""Build script for the optional compiled Wigner kernel.

The package works without the extension: when the compiled module is
missing, a pure NumPy implementation with identical semantics is used.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "bimodal._wigner_cy",
                ["src/bimodal/_wigner_cy.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    # No Cython available: install the pure Python package only.
    pass

setup(ext_modules=ext_modules)
