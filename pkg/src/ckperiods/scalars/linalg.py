"""Dense linear algebra generic over the scalar domains.

Matrices are lists of rows and act on column vectors.  Over p-adics, pivots are
chosen by minimal valuation; ``solve_linear`` reports the precision loss (sum of
pivot valuations) and runs its forward elimination on the modular kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from ..errors import NoSolutionError, PrecisionExhaustedError
from . import kernels
from .domain import QQ, PadicField, domain_of
from .padic import INF, PadicNumber


def nz(x) -> bool:
    if type(x) is PadicNumber:
        return x.val != INF
    return x != 0


def _val(x):
    if type(x) is PadicNumber:
        return x.val
    return 0


def _native(domain):
    return PadicNumber if isinstance(domain, PadicField) else Fraction


def coerce_matrix(A, domain=None):
    domain = domain or domain_of(A)
    t = _native(domain)
    return [[x if type(x) is t else domain(x) for x in row] for row in A], domain


def coerce_vector(v, domain):
    return [domain(x) for x in v]


# elementary operations ------------------------------------------------------


def zeros(n: int, m: int) -> list[list]:
    return [[0] * m for _ in range(n)]


def identity(n: int, one=1) -> list[list]:
    return [[one if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(A):
    return [list(col) for col in zip(*A)]


def matmul(A, B):
    if not A:
        return []
    m = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [0] * m
        for k, a in enumerate(row):
            if not nz(a):
                continue
            brow = B[k]
            for j in range(m):
                b = brow[j]
                if nz(b):
                    acc[j] = acc[j] + a * b
        out.append(acc)
    return out


def matvec(A, v):
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            if nz(a) and nz(x):
                acc = acc + a * x
        out.append(acc)
    return out


def vecmat(v, A):
    """Row vector times matrix."""
    m = len(A[0]) if A else 0
    acc = [0] * m
    for x, row in zip(v, A):
        if not nz(x):
            continue
        for j in range(m):
            if nz(row[j]):
                acc[j] = acc[j] + x * row[j]
    return acc


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(c, A):
    return [[c * a for a in row] for row in A]


def vec_add(u, v):
    return [a + b for a, b in zip(u, v)]


def vec_sub(u, v):
    return [a - b for a, b in zip(u, v)]


def vec_scale(c, v):
    return [c * a for a in v]


def kron(A, B):
    out = []
    for ra in A:
        for rb in B:
            out.append([a * b for a in ra for b in rb])
    return out


def kron_vec(u, v):
    return [a * b for a in u for b in v]


def is_zero_matrix(A) -> bool:
    return not any(nz(x) for row in A for x in row)


def is_zero_vector(v) -> bool:
    return not any(nz(x) for x in v)


def matrices_equal(A, B) -> bool:
    return is_zero_matrix(mat_sub(A, B))


def block_diagonal(blocks):
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out


# echelon forms -------------------------------------------------------------


def rref(rows, pivot_limit: int | None = None, domain=None):
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns).

    Only the first ``pivot_limit`` columns are used as pivots when given.
    """
    if not rows:
        return [], []
    R, domain = coerce_matrix(rows, domain)
    width = len(R[0])
    limit = width if pivot_limit is None else pivot_limit
    one = domain.one
    pivots = []
    r = 0
    n = len(R)
    for c in range(limit):
        if r == n:
            break
        best_v, best_i = INF, -1
        for i in range(r, n):
            x = R[i][c]
            if nz(x):
                v = _val(x)
                if v < best_v:
                    best_v, best_i = v, i
                    if v <= 0 and not isinstance(domain, PadicField):
                        break
        if best_i < 0:
            continue
        R[r], R[best_i] = R[best_i], R[r]
        piv = R[r][c]
        prow = [x / piv if nz(x) else x for x in R[r]]
        prow[c] = one
        R[r] = prow
        support = [j for j in range(width) if nz(prow[j])]
        for i in range(n):
            if i == r:
                continue
            f = R[i][c]
            if not nz(f):
                continue
            row = R[i]
            for j in support:
                row[j] = row[j] - f * prow[j]
            row[c] = domain.zero
        pivots.append(c)
        r += 1
    return R[:r], pivots


def rank(A, domain=None) -> int:
    return len(rref(A, domain=domain)[1])


def nullspace(A, ncols: int | None = None, domain=None):
    """Basis (list of vectors) of {x : A x = 0}."""
    if ncols is None:
        ncols = len(A[0]) if A else 0
    if not A:
        domain = domain or QQ
        return [[domain.one if i == j else domain.zero for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(A, domain=domain)
    domain = domain or domain_of(A)
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v = [domain.zero] * ncols
        v[f] = domain.one
        for i, pc in enumerate(piv):
            v[pc] = -R[i][f]
        basis.append(v)
    return basis


# solving -------------------------------------------------------------------


@dataclass(frozen=True)
class Solution:
    x: list
    loss: int
    rank: int


def solve_linear(A, b, domain=None) -> Solution:
    """A particular solution of A x = b (free variables set to zero).

    Raises NoSolutionError when the system is inconsistent at working precision
    and PrecisionExhaustedError when the pivots consume all available digits.
    """
    domain = domain or domain_of(A, b)
    if isinstance(domain, PadicField):
        return _solve_padic(A, b, domain)
    return _solve_exact(A, b, domain)


def _solve_exact(A, b, domain) -> Solution:
    n = len(A)
    m = len(A[0]) if n else 0
    aug = [list(A[i]) + [b[i]] for i in range(n)]
    R, piv = rref(aug, domain=domain)
    if piv and piv[-1] == m:
        raise NoSolutionError("inconsistent linear system")
    x = [domain.zero] * m
    for i, c in enumerate(piv):
        x[c] = R[i][m]
    return Solution(x, 0, len(piv))


def _solve_padic(A, b, domain: PadicField) -> Solution:
    p, N = domain.p, domain.N
    n = len(A)
    m = len(A[0]) if n else 0
    if n == 0:
        return Solution([domain.zero] * m, 0, 0)
    M = N
    scaled = []
    for i in range(n):
        entries = [domain(x) for x in A[i]] + [domain(b[i])]
        vals = [e.val for e in entries if e.val != INF]
        # rows are only rescaled when needed for integrality, so the reported
        # loss is the valuation of the pivot product of the system as given
        s = min(min(vals), 0) if vals else 0
        for e in entries:
            if e.absprec - s < M:
                M = e.absprec - s
        scaled.append((entries, s))
    if M <= 0:
        raise PrecisionExhaustedError("no precision left in the input system")
    mod = p**M
    rows = []
    for entries, s in scaled:
        rows.append([0 if e.val == INF else e.unit * p ** (e.val - s) % mod for e in entries])
    pivot_cols, pivot_vals = kernels.eliminate_mod(rows, m, p, M)
    loss = sum(pivot_vals)
    if loss >= M:
        raise PrecisionExhaustedError(
            f"pivot valuations {pivot_vals} exhaust the working precision {M}",
            {"pivot_vals": pivot_vals, "precision": M})
    r = len(pivot_cols)
    # a pivot of valuation v leaves the rows below it known modulo p^(M - v)
    known = [M - sum(pivot_vals[:k]) for k in range(r + 1)]
    for i in range(r, n):
        if rows[i][m] % p ** known[r]:
            raise NoSolutionError("inconsistent linear system at working precision")

    def num(x, absprec):
        return PadicNumber.from_residue(p, x, 0, absprec, N)

    x = [domain.zero] * m
    for k in range(r - 1, -1, -1):
        row = rows[k]
        acc = num(row[m], known[k])
        for l in range(k + 1, r):
            jl = pivot_cols[l]
            if row[jl]:
                acc = acc - num(row[jl], known[k]) * x[jl]
        x[pivot_cols[k]] = acc / num(row[pivot_cols[k]], known[k])
    return Solution(x, loss, r)


def solve_matrix(A, B, domain=None):
    """Solve A X = B column by column; returns (X, total loss)."""
    cols = transpose(B)
    xs, loss = [], 0
    for c in cols:
        s = solve_linear(A, c, domain)
        xs.append(s.x)
        loss = max(loss, s.loss)
    return transpose(xs), loss


def inverse(A, domain=None):
    n = len(A)
    domain = domain or domain_of(A)
    aug = [list(A[i]) + [domain.one if i == j else domain.zero for j in range(n)] for i in range(n)]
    R, piv = rref(aug, pivot_limit=n, domain=domain)
    if piv != list(range(n)):
        raise NoSolutionError("matrix is singular at working precision")
    return [row[n:] for row in R]


def det(A, domain=None):
    n = len(A)
    if n == 0:
        return 1
    R, domain = coerce_matrix(A, domain)
    d = domain.one
    for c in range(n):
        best_v, best_i = INF, -1
        for i in range(c, n):
            if nz(R[i][c]) and _val(R[i][c]) < best_v:
                best_v, best_i = _val(R[i][c]), i
        if best_i < 0:
            return domain.zero * d
        if best_i != c:
            R[c], R[best_i] = R[best_i], R[c]
            d = -d
        piv = R[c][c]
        d = d * piv
        for i in range(c + 1, n):
            f = R[i][c]
            if nz(f):
                f = f / piv
                R[i] = [a - f * bb for a, bb in zip(R[i], R[c])]
    return d


def charpoly(A) -> list:
    """Coefficients [c_0, ..., c_n] of det(x I - A) (monic), by Berkowitz.

    Division free, so no precision is lost to small denominators.
    """
    n = len(A)
    if n == 0:
        return [1]
    vec = [1, -A[n - 1][n - 1]]
    for size in range(2, n + 1):
        k = n - size
        a = A[k][k]
        R = [A[k][j] for j in range(k + 1, n)]
        C = [A[i][k] for i in range(k + 1, n)]
        sub = [row[k + 1:] for row in A[k + 1:]]
        diags = [1, -a]
        d = C
        for _ in range(size - 1):
            diags.append(-sum((r * x for r, x in zip(R, d) if nz(r) and nz(x)), 0))
            d = matvec(sub, d)
        # Toeplitz (size+1) x size, lower triangular with diags[i-j]
        new = []
        for i in range(size + 1):
            acc = 0
            for j in range(min(i + 1, size)):
                t = diags[i - j]
                if nz(t) and nz(vec[j]):
                    acc = acc + t * vec[j]
            new.append(acc)
        vec = new
    return list(reversed(vec))


def poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def resultant(f, g, domain=None):
    """Resultant of polynomials given by coefficient lists (lowest degree first)."""
    f = list(f)
    g = list(g)
    while len(f) > 1 and not nz(f[-1]):
        f.pop()
    while len(g) > 1 and not nz(g[-1]):
        g.pop()
    m, n = len(f) - 1, len(g) - 1
    if m == 0 and n == 0:
        return 1
    size = m + n
    S = zeros(size, size)
    fr = list(reversed(f))
    gr = list(reversed(g))
    for i in range(n):
        for j, c in enumerate(fr):
            S[i][i + j] = c
    for i in range(m):
        for j, c in enumerate(gr):
            S[n + i][i + j] = c
    return det(S, domain)


def exp_nilpotent(N):
    """exp of a nilpotent matrix (the series terminates)."""
    n = len(N)
    out = identity(n)
    term = identity(n)
    k = 1
    while True:
        term = matmul(term, N)
        if is_zero_matrix(term):
            break
        c = Fraction(1, factorial(k))
        out = [[a + c * t for a, t in zip(ra, rt)] for ra, rt in zip(out, term)]
        k += 1
        if k > n + 1:
            break
    return out


def log_unipotent(U):
    """log of a unipotent matrix."""
    n = len(U)
    N = mat_sub(U, identity(n))
    out = zeros(n, n)
    term = identity(n)
    k = 1
    while True:
        term = matmul(term, N)
        if is_zero_matrix(term):
            break
        c = Fraction((-1) ** (k + 1), k)
        out = [[a + c * t for a, t in zip(ra, rt)] for ra, rt in zip(out, term)]
        k += 1
        if k > n + 1:
            break
    return out
