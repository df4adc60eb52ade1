from setuptools import setup, find_packages

with open("README.md", "r") as readme_file:
    readme = readme_file.read()

requirements = ["astropy>=4.0", "toml", "numpy", "networkx",
                "importlib_resources; python_version < '3.9'"]

setup(
    name="polyent",
    version="0.1.0",
    description="Polymatroid axioms, entropy cone membership and partial Dowling geometries",
    long_description=readme,
    long_description_content_type="text/markdown",
    packages=find_packages(),
    package_data={"polyent.data": ["*.toml"]},
    install_requires=requirements,
    entry_points={"console_scripts": ["polyent=polyent.cli:main"]},
    classifiers=[
        "Programming Language :: Python :: 3.7",
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
    ],
)
