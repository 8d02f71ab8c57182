from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "pinchest._kernels_c",
                ["src/pinchest/_kernels_c.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
else:
    # pure-python install still works; kernels.py falls back to numpy
    ext_modules = []

setup(ext_modules=ext_modules)
