from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off keeps the compiled kernels bit-identical to the pure
# Python fallback (no fused multiply-adds).
extensions = [
    Extension(
        "antiloewner._kernels._native",
        ["src/antiloewner/_kernels/_native.pyx"],
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(ext_modules=cythonize(extensions, language_level="3"))
