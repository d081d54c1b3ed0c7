"""Exact two-party learning protocols and the constructions behind their limits."""

from . import classes, core, geometry

__version__ = "0.1.0"

__all__ = ["classes", "core", "geometry", "__version__"]
