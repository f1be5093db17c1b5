"""Weighted extremal functions and equilibrium measures for radial data in C^n."""

__version__ = '1.0.0'
