"""Exact engine for finitely presented graded algebras.

Computes degree-truncated noncommutative Groebner bases, Hilbert series,
and nilpotency indices over Q and prime fields, builds copy-inflated
presentations, and ships a reference corpus for end-to-end verification.
"""

from .freealg import Generator, Polynomial, Signature, apply_hom, signature_of
from .presentation import (
    CATALOG,
    Presentation,
    builtin,
    parse_presentation,
    serialize,
)
from .scalar import FieldSpec, Scalar

__all__ = [
    "CATALOG",
    "FieldSpec",
    "Generator",
    "Polynomial",
    "Presentation",
    "Scalar",
    "Signature",
    "apply_hom",
    "builtin",
    "parse_presentation",
    "serialize",
    "signature_of",
]

__version__ = "0.1.0"
