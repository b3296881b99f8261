import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("BISTATICDC_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "bistaticdc.kernels._compiled",
                    ["src/bistaticdc/kernels/_compiled.pyx"],
                    # fp-contract must stay off: the compiled kernels are
                    # required to be bit-identical to the pure-Python fallback,
                    # and fused multiply-adds would break that.
                    extra_compile_args=["-O3", "-ffp-contract=off"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        # No Cython available: install the pure-Python fallback only.
        ext_modules = []

setup(ext_modules=ext_modules)
