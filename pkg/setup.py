import os

from setuptools import Extension, setup

# The compiled term-map kernel is an optional accelerator: the package falls
# back to the pure-Python twin at import time if the extension is absent.
ext_modules = []
if not os.environ.get("SUPERQUANT_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("superquant._termops", ["src/superquant/_termops.pyx"])],
            language_level="3",
        )
    except ImportError:
        pass

setup(ext_modules=ext_modules)
