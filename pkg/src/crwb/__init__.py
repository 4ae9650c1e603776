"""Exact-arithmetic workbench for CR geometry of polynomial generic submanifolds."""

__version__ = "0.1.0"
