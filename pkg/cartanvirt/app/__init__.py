"""Symmetric spaces, the canonical virtual immersion Omega_0 and its verification."""

__version__ = "0.1"
