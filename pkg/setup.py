"""Build shim: compiles the optional C kernel extension.

The package is fully functional without the extension (submax.kernels falls
back to the pure-Python implementations), so any compiler/Cython failure
downgrades to a warning instead of failing the install.
"""

import warnings

from setuptools import setup


def _extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError as exc:
        warnings.warn(f"building without compiled kernels: {exc}")
        return []
    return cythonize(
        [
            Extension(
                "submax._kernels",
                ["src/submax/_kernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )


class _OptionalBuildExt:
    """Mixin deferring to setuptools' build_ext but tolerating compile errors."""


try:
    from setuptools.command.build_ext import build_ext as _build_ext

    class optional_build_ext(_build_ext):  # noqa: N801 - distutils naming
        def run(self):
            try:
                super().run()
            except Exception as exc:  # compiler missing, etc.
                warnings.warn(f"skipping compiled kernels: {exc}")

        def build_extension(self, ext):
            try:
                super().build_extension(ext)
            except Exception as exc:
                warnings.warn(f"skipping {ext.name}: {exc}")

    cmdclass = {"build_ext": optional_build_ext}
except ImportError:
    cmdclass = {}

setup(ext_modules=_extensions(), cmdclass=cmdclass)
