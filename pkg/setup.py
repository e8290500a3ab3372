"""Build the optional compiled RK4 kernel.

If Cython or a C compiler is unavailable the package still installs and
falls back to the pure-Python kernel at import time.
"""
import os
import sys

from setuptools import setup

ext_modules = []
if os.environ.get("MSGATE_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "msgate._rk4",
                    ["src/msgate/_rk4.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    # plain complex multiply; no __muldc3 calls in the inner loop
                    extra_compile_args=["-O3", "-fcx-limited-range"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except Exception as exc:  # pragma: no cover - build environment dependent
        print(f"msgate: building without compiled kernel ({exc})", file=sys.stderr)
        ext_modules = []

setup(ext_modules=ext_modules)
