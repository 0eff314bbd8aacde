"""Exponential sums with completely multiplicative coefficients.

Exact summation oracles, pretentious main-term predictors, oscillatory
integrals, and circle-method applications (weighted triple counts, Euler
local factors, extremal sign-pattern densities), each checked against
brute-force evaluation.
"""

from .errors import DomainError, ParseError
from .sieve import SieveTable, get_sieve

__all__ = ["DomainError", "ParseError", "SieveTable", "get_sieve"]
