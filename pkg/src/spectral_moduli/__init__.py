"""Numerics for the moduli space of genus-2 sinh-Gordon spectral curves."""

__version__ = "0.1.0"
