"""
Setup script for the qbnf package.
"""
from setuptools import setup, find_packages

setup(
    name="qbnf",
    version="0.1.0",
    packages=find_packages(exclude=["examples", "examples.*"]),
    install_requires=[
        "numpy>=1.19.0",
        "scipy>=1.6.0",
        "sympy>=1.9",
        "pandas>=1.2.0",
        "scikit-learn>=0.24.0",
        "python-dotenv>=0.19.0",
        "loguru>=0.5.3",
    ],
    extras_require={
        "test": ["pytest>=7.0"],
    },
    entry_points={
        "console_scripts": ["qbnf=src.main:main"],
    },
    python_requires=">=3.9",
)
