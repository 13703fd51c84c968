from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
    ext_modules = cythonize(
        [Extension("polybrace.kernels._rref_c", ["src/polybrace/kernels/_rref_c.pyx"])],
        language_level=3,
    )
except ImportError:
    # pure-Python fallback in polybrace.kernels covers this case
    ext_modules = []

setup(ext_modules=ext_modules)
