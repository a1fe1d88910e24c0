"""Spectral-variation bounds for non-selfadjoint perturbations of Hermitian matrices."""

__version__ = "0.1.0"
