"""Inner twists, projective fields of definition and huge symplectic images
over finite fields, computed by brute force at small parameters."""

from sympal.errors import SympalError

__version__ = "0.1.0"

__all__ = ["SympalError", "__version__"]
