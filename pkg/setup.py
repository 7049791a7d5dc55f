from setuptools import Extension, setup

# The compiled loop must be bit-compatible with the pure-Python fallback,
# so no -ffast-math and no FP contraction.
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "asymcorr._loops",
                ["src/asymcorr/_loops.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython available: install the pure-Python package only; the
    # backend selector falls back automatically.
    ext_modules = []

setup(ext_modules=ext_modules)
