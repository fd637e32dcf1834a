"""Weight-graded nilpotent Lie algebras given by structure constants.

Free algebras use the Lyndon basis with standard bracketing.  Each Lyndon word
w expands in the tensor algebra as w plus lexicographically larger words, so
any Lie element is decomposed by repeatedly peeling off its smallest word.
Truncation is by total weight: basis elements of weight below -depth are dropped.

Vectors are dense lists of scalars.  Scalars may be Fractions, p-adic numbers or
polynomials; only ring operations are used.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import DepthOverflowError, RelationsViolatedError, ValidationError
from ..scalars.linalg import nz, rref

MAX_BASIS = 4000
_FREE_CACHE: dict = {}


def lyndon_words(alphabet: int, max_len: int):
    """All Lyndon words of length <= max_len in increasing lexicographic order (Duval)."""
    if alphabet == 0 or max_len == 0:
        return
    w = [-1]
    while w:
        w[-1] += 1
        yield tuple(w)
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == alphabet - 1:
            w.pop()


def is_lyndon(w) -> bool:
    return all(w < w[i:] for i in range(1, len(w)))


def standard_factorization(w):
    """w = u v with v the longest proper Lyndon suffix."""
    for i in range(1, len(w)):
        if is_lyndon(w[i:]):
            return w[:i], w[i:]
    raise ValueError("word of length one has no factorization")


def _tensor_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            k = u + v
            out[k] = out.get(k, 0) + x * y
    return {k: c for k, c in out.items() if c}


def _tensor_bracket(a: dict, b: dict) -> dict:
    out = _tensor_mul(a, b)
    for k, c in _tensor_mul(b, a).items():
        out[k] = out.get(k, 0) - c
    return {k: c for k, c in out.items() if c}


class LyndonExpander:
    """Tensor expansions of standard bracketings, memoized by word."""

    def __init__(self):
        self.memo: dict = {}

    def expand(self, w) -> dict:
        if w not in self.memo:
            if len(w) == 1:
                self.memo[w] = {w: Fraction(1)}
            else:
                u, v = standard_factorization(w)
                self.memo[w] = _tensor_bracket(self.expand(u), self.expand(v))
        return self.memo[w]

    def decompose(self, elem: dict, allowed) -> dict:
        """Coordinates of a Lie element in the Lyndon basis (words outside ``allowed`` dropped)."""
        rest = dict(elem)
        out: dict = {}
        while rest:
            w = min(rest)
            c = rest[w]
            if not is_lyndon(w):
                raise ValueError(f"not a Lie element: smallest word {w} is not Lyndon")
            out[w] = c
            for k, d in self.expand(w).items():
                nv = rest.get(k, 0) - c * d
                if nv:
                    rest[k] = nv
                else:
                    rest.pop(k, None)
        return {w: c for w, c in out.items() if w in allowed}


class GradedLieAlgebra:
    """Finite-dimensional weight-graded Lie algebra with a sparse bracket table.

    ``table[(i, j)]`` for i < j is a dict k -> coefficient of [e_i, e_j].
    ``trees[i]`` is ("gen", g) or ("br", a, b) expressing e_i in terms of the
    free parent's basis (only for free algebras and their quotients).
    """

    def __init__(self, names, weights, table, depth: int, multiweights=None, generators=None,
                 trees=None, parent=None, kept=None, ideal=None, words=None, kind: str = "table"):
        self.kind = kind
        self.names = list(names)
        self.weights = list(weights)
        self.table = table
        self.depth = depth
        self.multiweights = None if multiweights is None else [tuple(m) for m in multiweights]
        self.generators = list(generators or [])
        self.trees = trees
        self.parent = parent
        self.kept = kept
        self.ideal = ideal
        self.words = words
        self.index = {n: i for i, n in enumerate(self.names)}

    # construction ----------------------------------------------------------

    @classmethod
    def free(cls, generators, depth: int, max_basis: int = MAX_BASIS) -> "GradedLieAlgebra":
        """Free Lie algebra on generators [(name, weight, multiweight or None), ...].

        Results are cached; the returned object must be treated as immutable.
        """
        gens = tuple(tuple(g) + (None,) * (3 - len(g)) for g in generators)
        gens = tuple((n, w, None if m is None else tuple(m)) for n, w, m in gens)
        key = (gens, depth, max_basis)
        if key not in _FREE_CACHE:
            _FREE_CACHE[key] = cls._build_free(gens, depth, max_basis)
        return _FREE_CACHE[key]

    @classmethod
    def _build_free(cls, gens, depth: int, max_basis: int) -> "GradedLieAlgebra":
        if depth < 1:
            raise ValidationError("depth must be positive")
        for name, w, _ in gens:
            if w > -1:
                raise ValidationError(f"generator {name} has weight {w}; weights must be <= -1")
        k = len(gens)
        gw = [g[1] for g in gens]
        has_mw = any(g[2] is not None for g in gens)
        if has_mw and any(g[2] is None for g in gens):
            raise ValidationError("either all or no generators carry a multiweight")
        min_abs = min((-w for w in gw), default=1)
        max_len = depth // min_abs
        words = []
        for w in lyndon_words(k, max_len):
            if sum(gw[a] for a in w) >= -depth:
                words.append(w)
                if len(words) > max_basis:
                    raise DepthOverflowError(f"free Lie algebra exceeds {max_basis} basis elements",
                                             {"generators": k, "depth": depth})
        words.sort(key=lambda w: (-sum(gw[a] for a in w), len(w), w))
        pos = {w: i for i, w in enumerate(words)}
        names, weights, mws, trees = [], [], [], []
        for w in words:
            if len(w) == 1:
                names.append(gens[w[0]][0])
                trees.append(("gen", w[0]))
            else:
                u, v = standard_factorization(w)
                names.append(f"[{names[pos[u]]},{names[pos[v]]}]")
                trees.append(("br", pos[u], pos[v]))
            weights.append(sum(gw[a] for a in w))
            if has_mw:
                r = len(gens[0][2])
                mws.append(tuple(sum(gens[a][2][t] for a in w) for t in range(r)))
        ex = LyndonExpander()
        allowed = set(words)
        table = {}
        for i, a in enumerate(words):
            for j in range(i + 1, len(words)):
                b = words[j]
                if weights[i] + weights[j] < -depth:
                    continue
                br = ex.decompose(_tensor_bracket(ex.expand(a), ex.expand(b)), allowed)
                if br:
                    table[(i, j)] = {pos[w]: c for w, c in br.items()}
        gen_idx = [pos[(a,)] for a in range(k) if (a,) in pos]
        return cls(names, weights, table, depth, mws if has_mw else None, gen_idx, trees, words=words,
                   kind="free")

    @classmethod
    def abelian(cls, names, weights, depth: int, multiweights=None) -> "GradedLieAlgebra":
        trees = [("gen", i) for i in range(len(names))]
        return cls(names, weights, {}, depth, multiweights, list(range(len(names))), trees,
                   kind="free" if len(names) <= 1 else "abelian")

    # basic data -------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def is_free(self) -> bool:
        return self.kind == "free"

    @property
    def free_parent(self) -> "GradedLieAlgebra":
        return self.parent if self.parent is not None else self

    def zero(self, zero=Fraction(0)):
        return [zero] * self.dim

    def basis_vector(self, i: int, one=Fraction(1), zero=Fraction(0)):
        v = [zero] * self.dim
        v[i] = one
        return v

    def grading_key(self, i: int):
        return self.multiweights[i] if self.multiweights is not None else self.weights[i]

    def weight_dims(self) -> dict:
        out: dict = {}
        for w in self.weights:
            out[w] = out.get(w, 0) + 1
        return dict(sorted(out.items(), reverse=True))

    def indices_of_key(self, key) -> list[int]:
        return [i for i in range(self.dim) if self.grading_key(i) == key]

    def is_abelian(self) -> bool:
        return not self.table

    # bracket ---------------------------------------------------------------

    def adjacency(self):
        """For each i, the list of (j, {k: c}) with [e_i, e_j] = sum c e_k nonzero."""
        adj = self.__dict__.get("_adj")
        if adj is None or self.__dict__.get("_adj_table") is not self.table:
            adj = [[] for _ in range(self.dim)]
            for (i, j), entry in self.table.items():
                adj[i].append((j, entry))
                adj[j].append((i, {k: -c for k, c in entry.items()}))
            self._adj = adj
            self._adj_table = self.table
        return adj

    def bracket(self, x, y):
        out = [0] * self.dim
        adj = self.adjacency()
        for i, a in enumerate(x):
            if not nz(a):
                continue
            for j, entry in adj[i]:
                b = y[j]
                if nz(b):
                    ab = a * b
                    for k, c in entry.items():
                        out[k] = out[k] + ab * c
        return out

    def structure_bracket(self, i: int, j: int) -> dict:
        if i == j:
            return {}
        if i < j:
            return dict(self.table.get((i, j), {}))
        return {k: -c for k, c in self.table.get((j, i), {}).items()}

    def ad_matrix(self, x):
        """Matrix of ad(x) acting on column vectors."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    def check_jacobi(self) -> bool:
        n = self.dim
        e = [self.basis_vector(i) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if self.weights[i] + self.weights[j] < -self.depth:
                    continue
                bij = self.bracket(e[i], e[j])
                for k in range(j + 1, n):
                    t1 = self.bracket(bij, e[k])
                    t2 = self.bracket(self.bracket(e[j], e[k]), e[i])
                    t3 = self.bracket(self.bracket(e[k], e[i]), e[j])
                    if any(nz(a + b + c) for a, b, c in zip(t1, t2, t3)):
                        return False
        return True

    def check_grading(self) -> bool:
        """The bracket adds weights (and multiweights)."""
        for (i, j), entry in self.table.items():
            for k in entry:
                if self.weights[k] != self.weights[i] + self.weights[j]:
                    return False
                if self.multiweights is not None:
                    s = tuple(a + b for a, b in zip(self.multiweights[i], self.multiweights[j]))
                    if self.multiweights[k] != s:
                        return False
        return True

    # free parent bookkeeping -------------------------------------------------

    def lift(self, v):
        """Quotient coordinates -> free parent coordinates (via kept basis words)."""
        if self.parent is None:
            return list(v)
        out = [0] * self.parent.dim
        for a, k in enumerate(self.kept):
            out[k] = v[a]
        return out

    def project(self, v):
        """Free parent coordinates -> quotient coordinates."""
        if self.parent is None:
            return list(v)
        r = list(v)
        for row, pc in self.ideal:
            f = r[pc]
            if nz(f):
                r = [a - f * b if nz(b) else a for a, b in zip(r, row)]
        return [r[k] for k in self.kept]

    # quotients -------------------------------------------------------------

    def quotient(self, relations) -> "GradedLieAlgebra":
        """Quotient of a free algebra by the ideal generated by homogeneous relations."""
        if self.parent is not None:
            raise ValidationError("quotients are taken of free algebras")
        n = self.dim
        rows = [list(map(Fraction, r)) for r in relations if any(nz(x) for x in r)]
        if not rows:
            return self
        e = [self.basis_vector(i) for i in range(n)]
        # columns reversed so that pivots fall on the heaviest words
        rev = lambda v: v[::-1]
        basis, _ = rref([rev(r) for r in rows])
        while True:
            new = []
            for r in basis:
                for i in range(n):
                    b = self.bracket(e[i], rev(r))
                    if any(nz(x) for x in b):
                        new.append(rev(b))
            R, piv = rref(basis + new) if new else (basis, None)
            if len(R) == len(basis):
                break
            basis = R
        R, piv = rref(basis)
        ideal = [(rev(row), n - 1 - pc) for row, pc in zip(R, piv)]
        dead = {pc for _, pc in ideal}
        kept = [i for i in range(n) if i not in dead]
        pos = {k: a for a, k in enumerate(kept)}
        names = [self.names[k] for k in kept]
        weights = [self.weights[k] for k in kept]
        mws = None if self.multiweights is None else [self.multiweights[k] for k in kept]
        Q = GradedLieAlgebra(names, weights, {}, self.depth, mws,
                             [pos[g] for g in self.generators if g in pos],
                             self.trees, parent=self, kept=kept, ideal=ideal, kind="quotient")
        table = {}
        for a in range(len(kept)):
            for b in range(a + 1, len(kept)):
                br = Q.project(self.bracket(e[kept[a]], e[kept[b]]))
                entry = {k: c for k, c in enumerate(br) if nz(c)}
                if entry:
                    table[(a, b)] = entry
        Q.table = table
        return Q

    def ideal_vectors(self):
        """Basis of the relation ideal in free-parent coordinates."""
        return [row for row, _ in (self.ideal or [])]

    # derivations -------------------------------------------------------------

    def extend_derivation(self, gen_values: dict):
        """Matrix (acting on columns) of the derivation with given generator values.

        ``gen_values`` maps free-generator positions to vectors of this algebra.
        For quotients the derivation is extended on the free parent and checked
        to preserve the relation ideal.
        """
        P = self.free_parent
        lifted = {g: self.lift(v) for g, v in gen_values.items()}
        zero = [0] * P.dim
        vals = []
        for i, t in enumerate(P.trees):
            if t[0] == "gen":
                vals.append(lifted.get(t[1], zero))
            else:
                a, b = t[1], t[2]
                ea, eb = P.basis_vector(a), P.basis_vector(b)
                vals.append([x + y for x, y in zip(P.bracket(vals[a], eb), P.bracket(ea, vals[b]))])
        for r in self.ideal_vectors():
            img = [0] * P.dim
            for i, c in enumerate(r):
                if nz(c):
                    img = [x + c * y for x, y in zip(img, vals[i])]
            if any(nz(x) for x in self.project(img)):
                raise RelationsViolatedError("derivation does not preserve the relations")
        cols = [self.project(vals[k]) for k in (self.kept if self.parent is not None else range(P.dim))]
        return [[cols[j][i] for j in range(self.dim)] for i in range(self.dim)]

    # display -----------------------------------------------------------------

    def describe(self) -> dict:
        out = {
            "dim": self.dim,
            "depth": self.depth,
            "basis": [{"name": n, "weight": w} for n, w in zip(self.names, self.weights)],
            "weight_dims": {str(k): v for k, v in self.weight_dims().items()},
        }
        if self.multiweights is not None:
            for b, m in zip(out["basis"], self.multiweights):
                b["multiweight"] = list(m)
        return out

    def __repr__(self):
        return f"GradedLieAlgebra(dim={self.dim}, depth={self.depth})"


def necklace_dimension(n: int, k: int) -> int:
    """Witt's formula: dimension of the degree-n part of the free Lie algebra on k letters."""
    total = 0
    for d in range(1, n + 1):
        if n % d == 0:
            total += _mobius(d) * k ** (n // d)
    return total // n


def _mobius(n: int) -> int:
    res, m, f = 1, n, 2
    while f * f <= m:
        if m % f == 0:
            m //= f
            if m % f == 0:
                return 0
            res = -res
        f += 1
    if m > 1:
        res = -res
    return res


def semidirect(pi: GradedLieAlgebra, U: GradedLieAlgebra, derivations) -> GradedLieAlgebra:
    """pi x| U with [X, x] = D_X x, for D_X the matrices in ``derivations`` (one per U basis element)."""
    n = pi.dim
    names = [f"pi:{a}" for a in pi.names] + [f"U:{a}" for a in U.names]
    weights = pi.weights + U.weights
    mws = None
    if pi.multiweights is not None and U.multiweights is not None:
        mws = pi.multiweights + U.multiweights
    table = {k: dict(v) for k, v in pi.table.items()}
    for (i, j), entry in U.table.items():
        table[(n + i, n + j)] = {n + k: c for k, c in entry.items()}
    for b, D in enumerate(derivations):
        for i in range(n):
            entry = {k: -D[k][i] for k in range(n) if nz(D[k][i])}
            if entry:
                table[(i, n + b)] = entry
    return GradedLieAlgebra(names, weights, table, max(pi.depth, U.depth), mws,
                            list(pi.generators) + [n + g for g in U.generators], kind="semidirect")
