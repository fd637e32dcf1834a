"""Scalars: exact rationals, capped-precision p-adics, and generic linear algebra."""

from .domain import QQ, PadicField, Rational, RationalField, ScalarDomain, domain_from_json, domain_of
from .linalg import (
    Solution,
    charpoly,
    det,
    exp_nilpotent,
    identity,
    inverse,
    kron,
    log_unipotent,
    matmul,
    matvec,
    nullspace,
    rank,
    resultant,
    rref,
    solve_linear,
    transpose,
)
from .padic import INF, PadicNumber, padic_from_rational

__all__ = [
    "INF",
    "PadicField",
    "PadicNumber",
    "QQ",
    "Rational",
    "RationalField",
    "ScalarDomain",
    "Solution",
    "charpoly",
    "det",
    "domain_from_json",
    "domain_of",
    "exp_nilpotent",
    "identity",
    "inverse",
    "kron",
    "log_unipotent",
    "matmul",
    "matvec",
    "nullspace",
    "padic_from_rational",
    "rank",
    "resultant",
    "rref",
    "solve_linear",
    "transpose",
]
