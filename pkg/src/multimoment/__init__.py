"""Weak and homotopy moment maps for polynomial n-plectic structures on R^N."""

__version__ = "0.1.0"
