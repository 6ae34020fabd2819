"""Finite verification laboratory for automorphism groups of pseudo-finite fields."""

__version__ = "0.1.0"
