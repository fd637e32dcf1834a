"""Seeded generators of random test objects.

Every generator takes a ``numpy.random.Generator``; suites derive one per trial
from a root ``SeedSequence`` so each trial is reproducible on its own.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .filtlin import BifilteredSpace, Filtration, Subspace
from .phimod import PhiModule
from .scalars.domain import QQ
from .scalars.linalg import det, inverse, matmul, rank


def trial_rngs(seed: int, count: int):
    """Independent generators, one per trial."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(count)]


def small_int(rng, lo: int = -3, hi: int = 3) -> int:
    return int(rng.integers(lo, hi + 1))


def random_matrix(rng, n: int, m: int, domain=QQ, lo: int = -3, hi: int = 3):
    return [[domain(small_int(rng, lo, hi)) for _ in range(m)] for _ in range(n)]


def random_invertible(rng, n: int, domain=QQ, unit_at: int | None = None):
    """Random invertible integer matrix; with ``unit_at`` its determinant is prime to that p."""
    while True:
        A = random_matrix(rng, n, n, QQ)
        if rank(A, QQ) < n:
            continue
        if unit_at is not None and det(A, QQ) % unit_at == 0:
            continue
        return [[domain(x) for x in row] for row in A]


def random_unipotent_upper(rng, n: int, domain=QQ):
    return [[domain(1) if i == j else (domain(small_int(rng)) if j > i else domain(0)) for j in range(n)]
            for i in range(n)]


def random_weights(rng, dim: int, choices=(-4, -3, -2, -1, 0)) -> list[int]:
    return sorted(int(x) for x in rng.choice(choices, size=dim))


def random_flag(rng, dim: int, basis, lo: int, hi: int, domain=QQ) -> Filtration:
    """Decreasing filtration F^lo = V ... F^{hi+1} = 0 spanned by prefixes of a basis."""
    cuts = sorted((int(x) for x in rng.integers(0, dim + 1, size=hi - lo)), reverse=True)
    steps = {lo: Subspace.span(basis, dim, domain)}
    for i, k in zip(range(lo + 1, hi + 1), cuts):
        steps[i] = Subspace.span(basis[:k], dim, domain)
    steps[hi + 1] = Subspace.zero(dim, domain)
    return Filtration(steps, dim, True, domain)


def random_bifiltered(rng, dim: int, domain=QQ, f_range=(-1, 2), weights=None) -> BifilteredSpace:
    """W coordinate-aligned after a random change of basis; F a random flag."""
    weights = weights or random_weights(rng, dim)
    g = random_invertible(rng, dim, QQ)
    cols = [[g[i][j] for i in range(dim)] for j in range(dim)]
    steps = {}
    for w in sorted(set(weights)):
        steps[w] = Subspace.span([[domain(x) for x in cols[j]] for j in range(dim) if weights[j] <= w], dim, domain)
    W = Filtration(steps, dim, False, domain)
    fb = random_invertible(rng, dim, QQ)
    F = random_flag(rng, dim, [[domain(x) for x in row] for row in fb], f_range[0], f_range[1], domain)
    return BifilteredSpace(dim, W, F, None, domain)


def eigenvalue_for_weight(rng, n: int, p: int) -> Fraction:
    """A rational of p-adic valuation n/2 times a small unit (n even)."""
    units = [u for u in range(1, 2 * p) if u % p][:4]
    u = int(rng.choice(units)) * (1 if rng.random() < 0.5 else -1)
    return Fraction(u) * Fraction(p) ** (n // 2)


def random_phimodule(rng, dims_by_weight: dict, p: int = 5, domain=QQ, aligned: bool = False):
    """Random module with even weights and eigenvalues of valuation n/2 on gr_n.

    phi is upper triangular in an adapted basis g; unless ``aligned``, g is a
    random invertible matrix so W is not coordinate-aligned.  Returns the module
    and the chosen eigenvalues per weight.
    """
    if any(n % 2 for n in dims_by_weight):
        raise ValueError("random modules use even weights")
    weights = [n for n in sorted(dims_by_weight) for _ in range(dims_by_weight[n])]
    dim = len(weights)
    eig = {}
    T = [[Fraction(0)] * dim for _ in range(dim)]
    for i, n in enumerate(weights):
        lam = eigenvalue_for_weight(rng, n, p)
        eig.setdefault(n, []).append(lam)
        T[i][i] = lam
        for j in range(i + 1, dim):
            T[i][j] = Fraction(small_int(rng))
    # the change of basis lies in GL_n(Z_p), so the p-adic conditioning comes from phi alone
    if aligned:
        g = random_unipotent_upper(rng, dim, QQ)
    else:
        g = random_invertible(rng, dim, QQ, unit_at=p)
    phi = matmul(matmul(g, T), inverse(g, QQ))
    phi = [[domain(x) for x in row] for row in phi]
    cols = [[domain(g[i][j]) for i in range(dim)] for j in range(dim)]
    steps = {w: Subspace.span([cols[j] for j in range(dim) if weights[j] <= w], dim, domain)
             for w in sorted(set(weights))}
    space = BifilteredSpace(dim, Filtration(steps, dim, False, domain), None, None, domain)
    return PhiModule(space, phi), eig


def random_dims_by_weight(rng, max_dim: int, weights=(-4, -2, 0)) -> dict:
    dim = int(rng.integers(1, max_dim + 1))
    out: dict = {}
    for w in rng.choice(weights, size=dim):
        out[int(w)] = out.get(int(w), 0) + 1
    return out


def _frobenius_unit(rng, p: int) -> Fraction:
    units = [u for u in range(1, 3 * p) if u % p][:6]
    num, den = (int(x) for x in rng.choice(units, size=2))
    return Fraction(num * (1 if rng.random() < 0.5 else -1), den)


def random_extension_scenario(rng, p: int = 5, domain=QQ, shape: str | None = None):
    """A random extension of the unit object by M (dim M <= 3) with its unipotent group.

    The torus has rank 2 with weight -2(a+b), Hodge level -a and Frobenius
    values of valuation -1 on each factor.  ``pure``: M is pure of one weight and
    U is abelian, one generator per basis vector of M.  ``chain``: M has weights
    -4 and -2 in a chain and U is the Heisenberg algebra.  phi and F are
    translates of the graded data by random elements of U.
    """
    from .period import PeriodScenario, TorusData
    from .uni.lie import GradedLieAlgebra
    from .uni.reps import standard_representation

    shape = shape or str(rng.choice(["pure", "chain"]))
    torus = TorusData(2, (-2, -2), (-1, 0), (_frobenius_unit(rng, p) / p, _frobenius_unit(rng, p) / p))
    unit_steps = [(1, 0), (0, 1)]
    if shape == "pure":
        k = int(rng.integers(1, 4))
        half = int(rng.integers(1, 3))
        mws = []
        for i in range(k):
            a = int(rng.integers(1 if i == 0 else 0, half + 1))
            mws.append((a, half - a))
        U = GradedLieAlgebra.free([(f"s{i + 1}", -2 * half, m) for i, m in enumerate(mws)], 2 * half)
        n = k + 1
        mats = {i: [[domain.one if (r, c) == (i, k) else domain.zero for c in range(n)] for r in range(n)]
                for i in range(k)}
        space_mws = mws + [(0, 0)]
    elif shape == "chain":
        m1 = (1, 0)
        step = unit_steps[int(rng.integers(0, 2))]
        m2 = (m1[0] + step[0], m1[1] + step[1])
        U = GradedLieAlgebra.free([("x", -2, m1), ("y", -2, step)], 4)
        n = 3

        def unit(r, c):
            return [[domain.one if (i, j) == (r, c) else domain.zero for j in range(n)] for i in range(n)]

        mats = {0: unit(1, 2), 1: unit(0, 1)}
        space_mws = [m2, m1, (0, 0)]
    else:
        raise ValueError(f"unknown shape {shape!r}")
    rep = standard_representation(U, mats, n, domain)
    c = [small_int(rng, -2, 2) for _ in range(U.dim)]
    h = [small_int(rng, -2, 2) for _ in range(U.dim)]
    return PeriodScenario.from_paths(U, torus, space_mws, rep, c, h, domain)
