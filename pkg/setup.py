"""
symcomplex - complexity workbench for sequences and subshifts of finite type.
"""

from setuptools import setup, find_packages

setup(
    name="symcomplex",
    version="0.1.0",
    description="Factor, palindrome and pattern complexity, entropy, intricacy and Markov-measure maximizers",
    python_requires=">=3.9",
    packages=find_packages(exclude=["tests", "tests.*", "examples", "examples.*"]),
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.11",
        "networkx>=3.1",
        "pydantic>=2.5,<3",
        "pydantic-settings>=2.1",
        "python-dotenv>=1.0",
        "loguru>=0.7",
    ],
    extras_require={"test": ["pytest>=7.4"]},
    entry_points={"console_scripts": ["symcomplex=symcomplex.main:main"]},
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
)
