"""Deterministic factoring of split polynomials over finite fields."""

from ._schemefactor import (
    SchemeFactorError,
    cyclotomic_valencies,
    factor,
    linnik_p1s,
    orbit_scan,
    prime_degree_factor,
    smooth_divisor,
)

__all__ = [
    "SchemeFactorError",
    "cyclotomic_valencies",
    "factor",
    "linnik_p1s",
    "orbit_scan",
    "prime_degree_factor",
    "smooth_divisor",
]
