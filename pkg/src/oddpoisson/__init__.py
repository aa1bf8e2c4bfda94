"""Exact linear odd Poisson brackets and their Delta-operator superalgebra."""

__version__ = "0.1.0"
