"""Exact computation with congruence-preserving maps, equivalence lattices and ultrametric spaces."""
from .errors import CongrueError

__version__ = "0.1.0"

__all__ = ["CongrueError", "__version__"]
