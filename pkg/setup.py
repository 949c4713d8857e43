from setuptools import setup, find_packages

# Root-level manifest so `pip install -e .` works from the repository root;
# mirrors cartanvirt/setup.py, with the `app` package living under cartanvirt/.
setup(
    name="cartanvirt",
    version="0.1",
    package_dir={"": "cartanvirt"},
    packages=find_packages(where="cartanvirt", exclude=["tests", "tests.*"]),
    install_requires=[
        "numpy",
        "scipy",
        "pydantic",
        "pydantic-settings",
        "python-dotenv",
    ],
    extras_require={"test": ["pytest"]},
    entry_points={"console_scripts": ["cartanvirt=app.main:main"]},
)
