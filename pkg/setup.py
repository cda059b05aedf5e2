import os

from setuptools import Extension, setup

ext_modules = []
pyx = os.path.join("src", "dialectica", "_kernels", "_fast.pyx")
if os.path.exists(pyx):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("dialectica._kernels._fast", [pyx], optional=True)],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
