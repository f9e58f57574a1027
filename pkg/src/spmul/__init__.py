"""Probabilistic sparse polynomial multiplication through evaluations in
cyclic algebras and a peeling decoder."""

from .polycore import (
    ParseError,
    PolyError,
    PolyStats,
    SparsePoly,
    kronecker,
    naive_mul,
    parse_poly,
    poly_stats,
    random_poly,
    serialize,
    unkronecker,
    verify_product,
)
from .pipeline import (
    RecoveryParams,
    multiply_heuristic,
    recover_coefficients,
    recover_exponents,
    recover_exponents_supersparse,
)
from .unconditional import (
    multiply_mod_pi,
    multiply_unconditional,
    recover_coefficients_lv,
)

__all__ = [
    "ParseError",
    "PolyError",
    "PolyStats",
    "RecoveryParams",
    "SparsePoly",
    "kronecker",
    "multiply_heuristic",
    "multiply_mod_pi",
    "multiply_unconditional",
    "naive_mul",
    "parse_poly",
    "poly_stats",
    "random_poly",
    "recover_coefficients",
    "recover_coefficients_lv",
    "recover_exponents",
    "recover_exponents_supersparse",
    "serialize",
    "unkronecker",
    "verify_product",
]

__version__ = "0.1.0"
