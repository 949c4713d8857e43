from setuptools import setup, find_packages

setup(
    name="cartanvirt",
    version="0.1",
    packages=find_packages(exclude=["tests"]),
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
