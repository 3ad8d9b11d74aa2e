"""Exact computations with torsion-free finitely generated 2-step nilpotent groups."""

from .group import GroupElement, SkewTriple, HEISENBERG

__all__ = ["GroupElement", "SkewTriple", "HEISENBERG"]
__version__ = "0.1.0"
