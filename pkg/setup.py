import os

from setuptools import Extension, setup

# The compiled kernels are optional: the package falls back to the pure-Python
# implementation in gcsa._kernels_py when the extension is unavailable.
ext_modules = []
if os.environ.get("GCSA_NO_EXTENSION") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("gcsa._kernels", ["src/gcsa/_kernels.pyx"])],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
