"""Numerical laboratory for dispersive propagators and Brownian-translate counterexamples."""

__version__ = "0.1.0"
