"""Exact twisted induction and relative projectivity for modular group algebras."""

__version__ = "0.1.0"
