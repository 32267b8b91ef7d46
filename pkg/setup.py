"""Build hook for the optional compiled kernel extension.

The package works without the extension (a pure-Python backend is
selected at import time), so a missing Cython or a failing C compiler
must not break installation.  Set AUTOQUERY_NO_EXTENSION=1 to skip the
build explicitly.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("AUTOQUERY_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "autoquery.kernels._ckernels",
                    ["src/autoquery/kernels/_ckernels.pyx"],
                    optional=True,
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
