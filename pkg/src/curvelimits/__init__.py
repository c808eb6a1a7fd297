"""Limits of plane curves under degenerating linear transformations."""

__version__ = "0.1.0"
