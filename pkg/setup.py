from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # Without Cython the package still installs; the pure-Python kernels
    # take over at import time.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "dxhash._kernels._native",
                ["src/dxhash/_kernels/_native.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
