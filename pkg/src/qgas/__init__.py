"""Statevector simulation and Grover adaptive search for binary polynomials."""

__version__ = "0.1.0"
