"""Carrier rings: exact scalars, Laurent polynomials, truncated series, matrices."""

from .field import GF, QQ, Field, Scalar, is_prime
from .laurent import LaurentPoly, format_terms, laurent_vars, monomial_key, unit_vector, weight
from .linalg import Matrix, SparseEchelon
from .series import LocalSeries, TruncSeries, compose, formal_inverse, identity_map
from .unipoly import UniPoly

__all__ = [
    "GF", "QQ", "Field", "Scalar", "is_prime",
    "LaurentPoly", "format_terms", "laurent_vars", "monomial_key", "unit_vector", "weight",
    "Matrix", "SparseEchelon",
    "LocalSeries", "TruncSeries", "compose", "formal_inverse", "identity_map",
    "UniPoly",
]
