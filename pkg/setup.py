from setuptools import Extension, find_packages, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = [
    Extension("ruhull._kernels._speedups", ["src/ruhull/_kernels/_speedups.pyx"]),
]

setup(
    # Metadata lives in pyproject.toml; the layout hints here keep old
    # setuptools versions (legacy editable-install path) working too.
    packages=find_packages("src"),
    package_dir={"": "src"},
    ext_modules=cythonize(extensions, language_level="3") if cythonize else [],
)
