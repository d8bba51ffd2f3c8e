"""Exact flatness criterion toolkit for odd-dimensional bihamiltonian structures."""

__version__ = "0.1.0"
