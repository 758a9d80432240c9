from setuptools import Extension, setup
from Cython.Build import cythonize

# -ffp-contract=off: the compiled kernels must agree bit for bit with the
# pure-Python fallback (fused multiply-adds would break that).
extensions = [
    Extension(
        "seqclass.kernels._native",
        ["src/seqclass/kernels/_native.pyx"],
        language="c++",
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
]

setup(
    ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}),
)
