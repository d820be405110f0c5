import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and os.environ.get("UML_ARENA_NO_EXT", "") in ("", "0"):
    ext_modules = cythonize(
        [
            Extension(
                "uml_arena._ckernel",
                ["src/uml_arena/_ckernel.pyx"],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
