import os

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

extensions = [
    Extension(
        "focused_macros._kernel",
        ["src/focused_macros/_kernel.pyx"],
        include_dirs=[np.get_include()],
        extra_compile_args=["-O3"],
        language="c++",
    )
]

if os.environ.get("FOCUSED_MACROS_PURE_PYTHON", "") not in ("", "0"):
    extensions = []

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}))
