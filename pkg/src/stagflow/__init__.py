"""Numerical laboratory for stagnation-point Euler flows reduced to a nonlocal 1-D equation."""
__version__ = "0.1.0"
