"""Exact local constants for Eisenstein Fourier coefficients over CM extensions."""
__version__ = "0.1.0"
