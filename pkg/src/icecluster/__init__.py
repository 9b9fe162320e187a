"""icecluster: a symbolic engine for cluster algebras with coefficients,
driven by ice quivers with potential."""

__version__ = "0.1.0"
