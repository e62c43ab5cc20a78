"""Finite p-group arithmetic and Schur multiplier bound verification."""

__version__ = "0.1.0"
