import os

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# The GIG kernel consumes numpy's BitGenerator C API; the distribution
# functions live in the static npyrandom library shipped inside numpy.
np_random_lib = os.path.join(os.path.dirname(np.__file__), "random", "lib")

extensions = [
    Extension(
        "mbsp._gig_compiled",
        ["src/mbsp/_gig_compiled.pyx"],
        include_dirs=[np.get_include()],
        library_dirs=[np_random_lib],
        libraries=["npyrandom"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
]

setup(ext_modules=cythonize(extensions, language_level=3))
