from setuptools import find_packages, setup

setup(
    name="diagmolien",
    version="0.1.0",
    description="Hilbert series of diagonal invariants for groups H x| S_n",
    packages=find_packages(include=["src", "src.*"]),
    python_requires=">=3.9",
    install_requires=["pydantic>=2", "python-dotenv", "sympy>=1.12"],
    extras_require={"test": ["pytest", "hypothesis"]},
    entry_points={"console_scripts": ["diagmolien = src.main:main"]},
)
