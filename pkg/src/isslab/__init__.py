"""Numerical laboratory for weak, strong, and uniform input-to-state stability."""

__version__ = "0.1.0"
