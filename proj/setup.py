"""Build the pybind11 extension through the project's CMake tree.

The wheel contains just the `emvm` package (python/emvm) plus the compiled
`_emvm` module; the CLI binary and tests stay in the CMake build.
"""

import os
import subprocess
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class CMakeExtension(Extension):
    def __init__(self, name: str):
        super().__init__(name, sources=[])


class CMakeBuild(build_ext):
    def build_extension(self, ext: CMakeExtension) -> None:
        extdir = os.path.abspath(os.path.dirname(self.get_ext_fullpath(ext.name)))
        source_dir = os.path.abspath(os.path.dirname(__file__))
        cfg = "Debug" if self.debug else "Release"

        cmake_args = [
            f"-DEMVM_PY_OUTPUT_DIR={extdir}",
            f"-DPython_EXECUTABLE={sys.executable}",
            f"-DCMAKE_BUILD_TYPE={cfg}",
        ]

        os.makedirs(self.build_temp, exist_ok=True)
        subprocess.run(
            ["cmake", source_dir, *cmake_args], cwd=self.build_temp, check=True
        )
        subprocess.run(
            ["cmake", "--build", ".", "--target", "_emvm", "-j"],
            cwd=self.build_temp,
            check=True,
        )


setup(
    ext_modules=[CMakeExtension("emvm._emvm")],
    cmdclass={"build_ext": CMakeBuild},
)
