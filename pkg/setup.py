import os

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    if not os.path.exists("src/primbase/_fixscan_c.pyx"):
        raise ImportError("extension source not present")
    ext_modules = cythonize(
        [
            Extension(
                "primbase._fixscan_c",
                ["src/primbase/_fixscan_c.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except ImportError:
    # Pure-python fallback kernel is used when the extension is absent.
    pass

setup(ext_modules=ext_modules)
