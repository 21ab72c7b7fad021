"""Finite-rank verification harness for Weyl-Schrodinger representations
over virtual unitary matrices."""

__version__ = "0.1.0"
