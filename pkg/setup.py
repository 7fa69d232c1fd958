#!/usr/bin/env python3
"""
Setup script for SkewForge - metric adjusted skew information toolkit
"""

from setuptools import setup, find_packages


# Read the README file
def read_readme():
    try:
        with open("README.md", "r", encoding="utf-8") as fh:
            return fh.read()
    except FileNotFoundError:
        return "SkewForge - metric adjusted skew information toolkit"


base_requirements = [
    "numpy>=1.22",
    "scipy>=1.8",
    "click>=8.0.0",
    "colorama>=0.4.0",
    "psutil>=5.9.0",
]

dev_requirements = [
    "pytest>=6.0",
    "hypothesis>=6.0",
    "black>=22.0",
    "flake8>=4.0",
    "mypy>=0.900",
]

setup(
    name="skewforge",
    version="0.1.0",
    author="SkewForge Team",
    author_email="",
    description="Metric adjusted skew information, quantum uncertainty and entanglement detection for finite-dimensional states",
    long_description=read_readme(),
    long_description_content_type="text/markdown",
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Physics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Operating System :: OS Independent",
        "Environment :: Console",
    ],
    packages=find_packages(exclude=["tests", "examples", "examples.*"]),
    python_requires=">=3.9",
    install_requires=base_requirements,
    extras_require={
        "dev": dev_requirements,
    },
    entry_points={
        "console_scripts": [
            "skewforge=src.main:main",
            "skewforge-cli=src.cli.commands:cli",
        ],
    },
    include_package_data=True,
    zip_safe=False,
    keywords="quantum information, skew information, quantum fisher information, entanglement detection",
)
