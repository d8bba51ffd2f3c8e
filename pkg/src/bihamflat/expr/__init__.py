"""Exact multivariate rational-function arithmetic and the expression parser."""
from .gcd import poly_gcd, poly_lcm
from .parser import (
    BinOp,
    ChartContext,
    Const,
    Coord,
    ExprAst,
    Neg,
    ParseError,
    Pow,
    coerce_point,
    differentiate,
    evaluate,
    parse_expr,
    parse_rational_literal,
    to_rational,
)
from .poly import Monomial, Polynomial, grlex_key, monomial_degree
from .rational import RationalFunction

__all__ = [
    "BinOp", "ChartContext", "Const", "Coord", "ExprAst", "Monomial", "Neg", "ParseError",
    "Polynomial", "Pow", "RationalFunction", "coerce_point", "differentiate", "evaluate",
    "grlex_key", "monomial_degree", "parse_expr", "parse_rational_literal", "poly_gcd",
    "poly_lcm", "to_rational",
]
