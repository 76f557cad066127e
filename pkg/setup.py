from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; kernels fall back automatically
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("atfkit._speedups", ["src/atfkit/_speedups.pyx"], extra_compile_args=["-O2"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
