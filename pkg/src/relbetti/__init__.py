"""Exact Betti diagrams of poset-indexed modules over GF(p).

Computes minimal resolutions, Koszul homology, and Betti diagrams of functors
from a finite poset into finite-dimensional vector spaces, both in the
standard sense and relative to a graded collection of projective objects.
"""

from .errors import RelbettiError

__all__ = ["RelbettiError"]
__version__ = "0.1.0"
