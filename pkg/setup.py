from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python fallback is used at import time
    cythonize = None

extensions = [Extension("extt._reach", ["src/extt/_reach.pyx"], extra_compile_args=["-O3"], optional=True)]

setup(ext_modules=cythonize(extensions, compiler_directives={"language_level": "3"}) if cythonize else [])
