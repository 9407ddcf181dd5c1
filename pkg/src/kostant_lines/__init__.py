"""Kostant lines, the compatibility functional, singular-line Diophantine
analysis and affine Margulis invariants."""

__version__ = "0.1.0"
