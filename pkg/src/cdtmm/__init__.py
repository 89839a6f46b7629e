"""Exact and numerical tools for the dually weighted CDT matrix model."""

__version__ = "0.1.0"
