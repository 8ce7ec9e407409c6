"""Compression of the Okamura-Seymour metric on unweighted planar graphs."""

__version__ = "0.1.0"
