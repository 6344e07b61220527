"""Decide pure infiniteness of graph C*-algebras from the graph alone."""

__version__ = "0.1.0"
