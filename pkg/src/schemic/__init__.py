"""Exact computations with fat points, arc spaces and motivic classes."""

__version__ = "0.1.0"
ENGINE_VERSION = f"schemic-{__version__}"
