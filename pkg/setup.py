# noqa: D100

from setuptools import setup

setup(
    name="pyhausdorff",
    version="0.1.0",
    description="Approximate Hausdorff distances with greedy trees",
    license="MIT",
    python_requires=">=3.8",
    packages=["pyhausdorff"],
    keywords=["hausdorff", "greedy permutation", "metric", "point sets"],
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    install_requires=["numpy", "scipy"],
    entry_points={"console_scripts": ["pyhausdorff=pyhausdorff.cli:main"]},
)
