"""Invariant theory of the orthogonal groups O+(2m, q), q odd."""
__version__ = "0.1.0"
