"""Numerical and exact tools for degree-2 hermitian and quaternionic modular forms."""

__version__ = "0.1.0"
