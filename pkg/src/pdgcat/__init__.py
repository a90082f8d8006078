"""Exact tools for p-DG algebras: nilHecke and KLR differentials, p-complexes and their symbols."""

__version__ = "0.1.0"
