"""Numerical laboratory for degrees and Sobolev distances of circle and
sphere maps."""

__version__ = "0.1.0"
