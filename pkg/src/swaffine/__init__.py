"""Switched affine systems: equilibria, vertex enumeration and switching design."""
__version__ = "0.1.0"
