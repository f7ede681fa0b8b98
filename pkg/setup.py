"""Build script: compiles the optional accelerator extension when possible.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so any failure to build it is downgraded to a
warning instead of aborting the install.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


def _extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available; skipping compiled kernels")
        return []
    from setuptools import Extension

    ext = Extension(
        "kdvgalerkin._kernels",
        ["src/kdvgalerkin/_kernels.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


class optional_build_ext(build_ext):
    """Never let a compiler failure break the pure-Python install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001 - any build failure is non-fatal
            warnings.warn(f"compiled kernels unavailable, using fallback: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            warnings.warn(f"failed to build {ext.name}, using fallback: {exc}")


setup(ext_modules=_extensions(), cmdclass={"build_ext": optional_build_ext})
