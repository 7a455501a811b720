"""Setup script for the atomc package."""

from setuptools import setup
import os

version = "0.1.0"

# Read README for long description
readme_path = os.path.join(os.path.dirname(__file__), "README.md")
if os.path.exists(readme_path):
    with open(readme_path, "r", encoding="utf-8") as f:
        long_description = f.read()
else:
    long_description = "Neutral-atom mapping, scheduling and shuttling trade-off toolkit"

# Read requirements
requirements_path = os.path.join(os.path.dirname(__file__), "requirements.txt")
if os.path.exists(requirements_path):
    with open(requirements_path, "r", encoding="utf-8") as f:
        requirements = [line.strip() for line in f if line.strip() and not line.startswith("#")]
else:
    requirements = [
        "pydantic>=2.0.0",
        "python-dotenv>=1.0.0",
        "networkx>=3.0",
        "numpy>=1.24",
        "pyparsing>=3.1",
    ]

setup(
    name="atomc",
    version=version,
    description="Mapping, scheduling and shuttling trade-off toolkit for neutral-atom quantum processors",
    long_description=long_description,
    long_description_content_type="text/markdown",
    packages=["studies"],
    py_modules=[
        "errors", "seeding", "config", "circuit", "qasm_io", "benchmarks", "hardware",
        "mapper", "scheduler", "shuttle", "fidelity", "reports", "pipeline", "cli",
    ],
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Physics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
    ],
    python_requires=">=3.9",
    install_requires=requirements,
    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "pytest-cov>=4.0.0",
            "black>=23.0.0",
            "flake8>=6.0.0",
            "mypy>=1.0.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "atomc=cli:main",
        ],
    },
    include_package_data=True,
    zip_safe=False,
)
