"""Baker-Campbell-Hausdorff product in exponential coordinates.

The series log(exp X exp Y) in two free letters is computed once per length in
the tensor algebra with exact rationals, rewritten in the Lyndon basis, and
cached.  Evaluating it in a nilpotent algebra only needs brackets, so the same
code serves rational, p-adic and polynomial coordinates.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import factorial

from ..scalars.linalg import nz
from .lie import GradedLieAlgebra, LyndonExpander, lyndon_words, standard_factorization


def _truncated_mul(a: dict, b: dict, L: int) -> dict:
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            if len(u) + len(v) <= L:
                k = u + v
                out[k] = out.get(k, 0) + x * y
    return {k: c for k, c in out.items() if c}


@lru_cache(maxsize=None)
def bch_series(L: int) -> tuple:
    """Lyndon-basis coefficients ((word, coeff), ...) of log(exp X exp Y) up to length L."""
    Z = {}
    for a in range(L + 1):
        for b in range(L + 1 - a):
            if a + b:
                Z[(0,) * a + (1,) * b] = Fraction(1, factorial(a) * factorial(b))
    log: dict = {}
    power = dict(Z)
    for k in range(1, L + 1):
        sign = Fraction((-1) ** (k + 1), k)
        for w, c in power.items():
            log[w] = log.get(w, 0) + sign * c
        power = _truncated_mul(power, Z, L)
        if not power:
            break
    log = {w: c for w, c in log.items() if c}
    coeffs = LyndonExpander().decompose(log, set(log) | set(lyndon_words(2, L)))
    return tuple(sorted(coeffs.items(), key=lambda t: (len(t[0]), t[0])))


def series_length(alg: GradedLieAlgebra) -> int:
    """Longest bracket that can be nonzero in the algebra."""
    if not alg.weights:
        return 1
    min_abs = max(1, min(-w for w in alg.weights))
    return max(1, alg.depth // min_abs)


def bch(alg: GradedLieAlgebra, x, y):
    """Coordinates of log(exp x exp y)."""
    if not any(nz(a) for a in y):
        return list(x)
    if not any(nz(a) for a in x):
        return list(y)
    if alg.is_abelian():
        return [a + b for a, b in zip(x, y)]
    memo = {(0,): list(x), (1,): list(y)}

    def value(w):
        v = memo.get(w)
        if v is None:
            u, s = standard_factorization(w)
            vu = value(u)
            if not any(nz(a) for a in vu):
                v = vu
            else:
                vs = value(s)
                v = alg.bracket(vu, vs) if any(nz(a) for a in vs) else vs
            memo[w] = v
        return v

    out = [a + b for a, b in zip(x, y)]
    for w, c in bch_series(series_length(alg)):
        if len(w) == 1:
            continue
        v = value(w)
        for i, a in enumerate(v):
            if nz(a):
                out[i] = out[i] + a * c
    return out
