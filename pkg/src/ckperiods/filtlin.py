"""Filtered, graded and bifiltered finite-dimensional spaces.

Conventions
-----------
Vectors are lists of scalars; a subspace is stored by its reduced row echelon
basis.  A filtration is a finite table ``index -> Subspace``:

* increasing (weight) filtrations: ``W_n`` is the entry with the largest index
  ``<= n``, and ``0`` below the smallest index;
* decreasing (Hodge) filtrations: ``F^i`` is the entry with the largest index
  ``<= i``, the whole space below the smallest index and ``0`` above the largest.

Matrices of maps act on column vectors, ``f(v) = A v``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import CompositionNonzeroError, ValidationError
from .scalars.domain import QQ, domain_of
from .scalars.linalg import (
    is_zero_matrix,
    kron_vec,
    matmul,
    matvec,
    nullspace,
    nz,
    rref,
    inverse,
    transpose,
)


class Subspace:
    """A subspace of k^n with canonical (reduced echelon) basis."""

    __slots__ = ("ambient", "basis", "pivots", "domain")

    def __init__(self, ambient: int, basis, pivots, domain):
        self.ambient = ambient
        self.basis = basis
        self.pivots = pivots
        self.domain = domain

    @classmethod
    def span(cls, vectors, ambient: int, domain=None) -> "Subspace":
        vectors = [list(v) for v in vectors]
        domain = domain or domain_of(vectors)
        if not vectors:
            return cls(ambient, [], [], domain)
        R, piv = rref(vectors, domain=domain)
        return cls(ambient, R, piv, domain)

    @classmethod
    def zero(cls, ambient: int, domain=QQ) -> "Subspace":
        return cls(ambient, [], [], domain)

    @classmethod
    def full(cls, ambient: int, domain=QQ) -> "Subspace":
        basis = [[domain.one if i == j else domain.zero for j in range(ambient)] for i in range(ambient)]
        return cls(ambient, basis, list(range(ambient)), domain)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def reduce(self, v):
        """Remainder of v modulo this subspace (zero in every pivot column)."""
        r = list(v)
        for row, pc in zip(self.basis, self.pivots):
            f = r[pc]
            if nz(f):
                r = [a - f * b if nz(b) else a for a, b in zip(r, row)]
                r[pc] = self.domain.zero
        return r

    def contains(self, v) -> bool:
        return not any(nz(x) for x in self.reduce(v))

    def coordinates(self, v):
        """Coordinates of v (assumed to lie in the subspace) in the echelon basis."""
        return [v[pc] for pc in self.pivots]

    def combine(self, coords):
        out = [self.domain.zero] * self.ambient
        for c, row in zip(coords, self.basis):
            if nz(c):
                out = [a + c * b for a, b in zip(out, row)]
        return out

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.ambient, self.domain)

    def annihilator(self) -> "Subspace":
        """Annihilator in the dual space (same coordinates)."""
        if not self.basis:
            return Subspace.full(self.ambient, self.domain)
        return Subspace.span(nullspace(self.basis, self.ambient, self.domain), self.ambient, self.domain)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient, self.domain)
        if self.dim == self.ambient:
            return other
        if other.dim == other.ambient:
            return self
        small, big = (self, other) if self.dim <= other.dim else (other, self)
        # c with sum c_i b_i in big, for b_i the basis of small
        rems = [big.reduce(b) for b in small.basis]
        cols = [[r[j] for r in rems] for j in range(self.ambient)]
        cols = [row for row in cols if any(nz(x) for x in row)]
        if not cols:
            return small
        kernel = nullspace(cols, small.dim, self.domain)
        return Subspace.span([small.combine(c) for c in kernel], self.ambient, self.domain)

    def complement_basis(self):
        """Standard basis vectors at the non-pivot columns (echelon complement)."""
        d = self.domain
        return [[d.one if i == j else d.zero for i in range(self.ambient)]
                for j in range(self.ambient) if j not in self.pivots]

    def nonpivots(self):
        return [j for j in range(self.ambient) if j not in self.pivots]

    def image(self, A, target_dim: int | None = None) -> "Subspace":
        n = len(A) if target_dim is None else target_dim
        return Subspace.span([matvec(A, b) for b in self.basis], n, self.domain)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis)

    def __le__(self, other):
        return self.is_subspace_of(other)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient == other.ambient and self.dim == other.dim
                and self.is_subspace_of(other))

    __hash__ = None

    def __repr__(self):
        return f"Subspace(ambient={self.ambient}, dim={self.dim})"


class Filtration:
    """Finite increasing or decreasing filtration of k^n (see module docstring)."""

    __slots__ = ("ambient", "steps", "decreasing", "domain")

    def __init__(self, steps: dict, ambient: int, decreasing: bool, domain=None):
        if not steps:
            raise ValidationError("a filtration needs at least one specified step")
        items = sorted(steps.items())
        self.domain = domain or items[0][1].domain
        self.ambient = ambient
        self.decreasing = decreasing
        self.steps = tuple(items)

    @classmethod
    def trivial(cls, ambient: int, domain=QQ, decreasing: bool = False, index: int = 0):
        if decreasing:
            return cls({index: Subspace.full(ambient, domain), index + 1: Subspace.zero(ambient, domain)},
                       ambient, True, domain)
        return cls({index: Subspace.full(ambient, domain)}, ambient, False, domain)

    @property
    def lo(self) -> int:
        return self.steps[0][0]

    @property
    def hi(self) -> int:
        return self.steps[-1][0]

    def at(self, n: int) -> Subspace:
        if n < self.lo:
            if self.decreasing:
                return Subspace.full(self.ambient, self.domain)
            return Subspace.zero(self.ambient, self.domain)
        if self.decreasing and n > self.hi:
            return Subspace.zero(self.ambient, self.domain)
        best = None
        for k, S in self.steps:
            if k <= n:
                best = S
            else:
                break
        return best

    def scan_range(self) -> range:
        """Indices outside of which the filtration is constant (0 or everything)."""
        return range(self.lo - 1, self.hi + 2)

    def sub_step(self, n: int) -> Subspace:
        """The next smaller step: W_{n-1} (increasing) or F^{n+1} (decreasing)."""
        return self.at(n + 1) if self.decreasing else self.at(n - 1)

    def jumps(self) -> list[int]:
        return [n for n in self.scan_range() if self.at(n).dim != self.sub_step(n).dim]

    def is_nested(self) -> bool:
        prev = None
        for n in self.scan_range():
            cur = self.at(n)
            if prev is not None:
                small, big = (cur, prev) if self.decreasing else (prev, cur)
                if not small.is_subspace_of(big):
                    return False
            prev = cur
        return True

    def is_exhaustive_and_separated(self) -> bool:
        if self.decreasing:
            return self.at(self.hi + 1).dim == 0
        return self.at(self.hi).dim == self.ambient

    def dims(self) -> dict:
        return {n: self.at(n).dim for n in self.scan_range()}

    def __eq__(self, other):
        if not isinstance(other, Filtration) or other.decreasing != self.decreasing:
            return NotImplemented
        lo = min(self.lo, other.lo) - 1
        hi = max(self.hi, other.hi) + 1
        return all(self.at(n) == other.at(n) for n in range(lo, hi + 1))

    __hash__ = None


@dataclass
class BifilteredSpace:
    """k^dim with weight filtration W, optional Hodge filtration F and grading.

    ``grading`` maps a weight (int) or torus multiweight (tuple) to a Subspace.
    """

    dim: int
    W: Filtration
    F: Filtration | None = None
    grading: dict | None = None
    domain: object = QQ

    @classmethod
    def coordinate(cls, weights, domain=QQ, F: dict | None = None, multiweights=None) -> "BifilteredSpace":
        """Space whose i-th basis vector has weight ``weights[i]``.

        ``F`` maps levels to lists of spanning vectors.  The grading is by weight,
        or by multiweight when ``multiweights`` is given.
        """
        n = len(weights)
        steps = {}
        for w in sorted(set(weights)):
            vecs = [[domain.one if j == i else domain.zero for j in range(n)]
                    for i in range(n) if weights[i] <= w]
            steps[w] = Subspace.span(vecs, n, domain)
        if not steps:
            steps = {0: Subspace.zero(0, domain)}
        keys = multiweights if multiweights is not None else weights
        grading = {}
        for key in sorted(set(keys)):
            vecs = [[domain.one if j == i else domain.zero for j in range(n)]
                    for i in range(n) if keys[i] == key]
            grading[key] = Subspace.span(vecs, n, domain)
        Ff = None
        if F is not None:
            Ff = Filtration({i: Subspace.span([[domain(x) for x in v] for v in vecs], n, domain)
                             for i, vecs in F.items()}, n, True, domain)
        return cls(n, Filtration(steps, n, False, domain), Ff, grading, domain)

    def validate(self) -> list[str]:
        """Located diagnostics; empty when the space is well formed."""
        issues = []
        if not self.W.is_nested():
            issues.append("W is not nested")
        if not self.W.is_exhaustive_and_separated():
            issues.append("W is not exhaustive (top step is not the whole space)")
        if self.F is not None:
            if not self.F.is_nested():
                issues.append("F is not nested")
            if not self.F.is_exhaustive_and_separated():
                issues.append("F is not separated (top step is not zero)")
        if self.grading is not None:
            total = sum(S.dim for S in self.grading.values())
            span = Subspace.span([b for S in self.grading.values() for b in S.basis], self.dim, self.domain)
            if total != self.dim or span.dim != self.dim:
                issues.append("grading components do not form a direct sum decomposition")
        return issues

    def check(self) -> "BifilteredSpace":
        issues = self.validate()
        if issues:
            raise ValidationError("; ".join(issues), {"issues": issues})
        return self

    def weights(self) -> list[int]:
        return self.W.jumps()

    def with_F(self, F: Filtration | None) -> "BifilteredSpace":
        return BifilteredSpace(self.dim, self.W, F, self.grading, self.domain)

    def with_grading(self, grading: dict | None) -> "BifilteredSpace":
        return BifilteredSpace(self.dim, self.W, self.F, grading, self.domain)


@dataclass
class FilteredMap:
    matrix: list
    source: BifilteredSpace
    target: BifilteredSpace


@dataclass
class GradedComponent:
    dim: int
    F: Filtration | None = None


@dataclass
class GradedSpace:
    components: dict
    domain: object = QQ

    @property
    def dim(self) -> int:
        return sum(c.dim for c in self.components.values())

    def dims(self) -> dict:
        return {n: c.dim for n, c in sorted(self.components.items())}


@dataclass
class AssociatedGraded(GradedSpace):
    """gr_W of a space, with the echelon sections of each quotient."""

    source: BifilteredSpace | None = None
    sections: dict = field(default_factory=dict)
    section_spaces: dict = field(default_factory=dict)

    def project(self, n: int, v):
        """Coordinates in gr_n of a vector v of W_n."""
        rem = self.source.W.at(n - 1).reduce(v)
        return [rem[pc] for pc in self.section_spaces[n].pivots]

    def lift(self, n: int, coords):
        """The echelon section of gr_n applied to coordinates."""
        return self.section_spaces[n].combine(coords)


@dataclass
class SectionSplitting:
    """A splitting of W given by lifts of the echelon sections of each gr_n."""

    dim: int
    domain: object
    lifts: dict
    sections: dict

    @property
    def weights(self) -> list[int]:
        return sorted(self.lifts)

    def component(self, n: int) -> Subspace:
        return Subspace.span(self.lifts[n], self.dim, self.domain)

    def components(self) -> dict:
        return {n: self.component(n) for n in self.weights}

    def matrix(self):
        """The splitting gr_W -> V as a block-column matrix (ascending weight)."""
        return transpose([v for n in self.weights for v in self.lifts[n]])

    def section_matrix(self):
        return transpose([v for n in self.weights for v in self.sections[n]])

    def automorphism(self):
        """The automorphism of V sending each echelon section vector to its lift."""
        return matmul(self.matrix(), inverse(self.section_matrix(), self.domain))


def is_unipotent_splitting(V: BifilteredSpace, components: dict) -> bool:
    """Whether the pieces V_n satisfy W_n = V_n + W_{n-1} with V_n meeting W_{n-1} trivially."""
    jumps = V.W.jumps()
    if sorted(components) != jumps and any(components[k].dim for k in components if k not in jumps):
        return False
    for n in jumps:
        Vn = components.get(n, Subspace.zero(V.dim, V.domain))
        Wn, Wp = V.W.at(n), V.W.at(n - 1)
        if not Vn.is_subspace_of(Wn) or Vn.intersect(Wp).dim or Vn.dim + Wp.dim != Wn.dim:
            return False
    return True


def _induced_component_filtration(F: Filtration, n: int, G: AssociatedGraded, d: int):
    steps = {}
    for i in F.scan_range():
        inter = F.at(i).intersect(G.source.W.at(n))
        steps[i] = Subspace.span([G.project(n, b) for b in inter.basis], d, G.domain)
    return Filtration(steps, d, True, G.domain)


def gr_W(V: BifilteredSpace) -> AssociatedGraded:
    G = AssociatedGraded({}, V.domain, V, {}, {})
    for n in V.W.jumps():
        Wn = V.W.at(n)
        Wp = V.W.at(n - 1)
        rems = [Wp.reduce(b) for b in Wn.basis]
        S = Subspace.span(rems, V.dim, V.domain)
        G.section_spaces[n] = S
        G.sections[n] = S.basis
        G.components[n] = GradedComponent(S.dim, None)
    if V.F is not None:
        for n, comp in G.components.items():
            comp.F = _induced_component_filtration(V.F, n, G, comp.dim)
    return G


def fil_of_graded(G: GradedSpace) -> BifilteredSpace:
    domain = G.domain
    order = sorted(G.components)
    offsets = {}
    off = 0
    for n in order:
        offsets[n] = off
        off += G.components[n].dim
    total = off

    def unit(i):
        return [domain.one if j == i else domain.zero for j in range(total)]

    steps = {}
    grading = {}
    for n in order:
        steps[n] = Subspace.span([unit(i) for i in range(offsets[n] + G.components[n].dim)], total, domain)
        grading[n] = Subspace.span([unit(offsets[n] + i) for i in range(G.components[n].dim)], total, domain)
    if not steps:
        steps = {0: Subspace.zero(0, domain)}
    F = None
    if any(c.F is not None for c in G.components.values()):
        comps = {n: (c.F or Filtration.trivial(c.dim, domain, True)) for n, c in G.components.items()}
        lo = min(f.lo for f in comps.values()) - 1
        hi = max(f.hi for f in comps.values()) + 1
        Fsteps = {}
        for i in range(lo, hi + 1):
            vecs = []
            for n in order:
                for b in comps[n].at(i).basis:
                    v = [domain.zero] * total
                    v[offsets[n]:offsets[n] + len(b)] = b
                    vecs.append(v)
            Fsteps[i] = Subspace.span(vecs, total, domain)
        F = Filtration(Fsteps, total, True, domain)
    return BifilteredSpace(total, Filtration(steps, total, False, domain), F, grading, domain)


# maps ----------------------------------------------------------------------


def _filtration(V: BifilteredSpace, kind: str) -> Filtration:
    if kind == "W":
        return V.W
    if V.F is None:
        return Filtration.trivial(V.dim, V.domain, True)
    return V.F


def _joint_range(*filts):
    lo = min(f.lo for f in filts) - 1
    hi = max(f.hi for f in filts) + 1
    return range(lo, hi + 1)


def _image(A, S: Subspace, target_dim: int) -> Subspace:
    return Subspace.span([matvec(A, b) for b in S.basis], target_dim, S.domain)


def _kernel(A, source_dim: int, domain) -> Subspace:
    if not A or source_dim == 0:
        return Subspace.full(source_dim, domain)
    return Subspace.span(nullspace(A, source_dim, domain), source_dim, domain)


def is_filtered(f: FilteredMap, kind: str = "W") -> bool:
    """Whether f maps each filtration step of the source into the target's."""
    Fs, Ft = _filtration(f.source, kind), _filtration(f.target, kind)
    for n in _joint_range(Fs, Ft):
        if not _image(f.matrix, Fs.at(n), f.target.dim).is_subspace_of(Ft.at(n)):
            return False
    return True


def is_strict(f: FilteredMap, kind: str = "W") -> bool:
    Fs, Ft = _filtration(f.source, kind), _filtration(f.target, kind)
    full = _image(f.matrix, Subspace.full(f.source.dim, f.source.domain), f.target.dim)
    for n in _joint_range(Fs, Ft):
        if _image(f.matrix, Fs.at(n), f.target.dim) != Ft.at(n).intersect(full):
            return False
    return True


def _graded_map(f: FilteredMap, kind: str, n: int):
    """Matrix of gr_n f between the echelon-section bases of the graded pieces."""
    Fs, Ft = _filtration(f.source, kind), _filtration(f.target, kind)
    src_sec = _sections(Fs, n)
    tgt_sec = _sections(Ft, n)
    sub = Ft.sub_step(n)
    cols = []
    for s in src_sec.basis:
        rem = sub.reduce(matvec(f.matrix, s))
        cols.append([rem[pc] for pc in tgt_sec.pivots])
    rows = len(tgt_sec.pivots)
    return [[cols[j][i] for j in range(len(cols))] for i in range(rows)], src_sec.dim, tgt_sec.dim


def _sections(Fl: Filtration, n: int) -> Subspace:
    sub = Fl.sub_step(n)
    return Subspace.span([sub.reduce(b) for b in Fl.at(n).basis], Fl.ambient, Fl.domain)


def _exact_at_middle(f_mat, g_mat, dim_l: int, dim_m: int, dim_n: int, domain) -> bool:
    im_f = _image(f_mat, Subspace.full(dim_l, domain), dim_m) if dim_l else Subspace.zero(dim_m, domain)
    ker_g = _kernel(g_mat, dim_m, domain) if dim_n else Subspace.full(dim_m, domain)
    return im_f == ker_g


@dataclass(frozen=True)
class ExactnessReport:
    exact_strict: bool
    levelwise: bool
    graded: bool

    @property
    def consistent(self) -> bool:
        return self.exact_strict == self.levelwise == self.graded

    def to_json(self) -> dict:
        return {"(1)": self.exact_strict, "(2)": self.levelwise, "(3)": self.graded}


def check_exactness_equivalences(f: FilteredMap, g: FilteredMap, kind: str = "W") -> ExactnessReport:
    """Evaluate the three exactness conditions for L --f--> M --g--> N.

    (1) exact at M with f strict; (2) exact on every filtration step;
    (3) exact on every graded piece.  For finite filtrations and g f = 0 the
    three agree; a disagreement indicates a bug and raises AssertionError.
    """
    domain = f.source.domain
    L, M, N = f.source, f.target, g.target
    if L.dim and N.dim and M.dim and not is_zero_matrix(matmul(g.matrix, f.matrix)):
        raise CompositionNonzeroError("g o f is not zero")
    exact = _exact_at_middle(f.matrix, g.matrix, L.dim, M.dim, N.dim, domain)
    c1 = exact and is_strict(f, kind)

    FL, FM, FN = (_filtration(X, kind) for X in (L, M, N))
    c2 = True
    for n in _joint_range(FL, FM, FN):
        im_f = _image(f.matrix, FL.at(n), M.dim)
        ker_g = _kernel(g.matrix, M.dim, domain).intersect(FM.at(n)) if N.dim else FM.at(n)
        if im_f != ker_g:
            c2 = False
            break

    c3 = True
    for n in _joint_range(FL, FM, FN):
        gf, dl, dm = _graded_map(f, kind, n)
        gg, _, dn = _graded_map(g, kind, n)
        if not _exact_at_middle(gf, gg, dl, dm, dn, domain):
            c3 = False
            break
    report = ExactnessReport(c1, c2, c3)
    assert c1 == c2, "conditions (1) and (2) disagree"
    assert c2 == c3, "conditions (2) and (3) disagree for finite filtrations with g o f = 0"
    return report


def short_exact_sequence(M: BifilteredSpace, sub_vectors) -> tuple[FilteredMap, FilteredMap]:
    """0 -> L -> M -> M/L -> 0 with the induced and quotient filtrations.

    L carries coordinates w.r.t. its echelon basis, M/L w.r.t. the echelon
    complement of L.  Both maps are strict by construction.
    """
    domain = M.domain
    Ls = Subspace.span(sub_vectors, M.dim, domain)
    k = Ls.dim
    q = Ls.nonpivots()

    def to_sub(S: Subspace) -> Subspace:
        inter = S.intersect(Ls)
        return Subspace.span([Ls.coordinates(b) for b in inter.basis], k, domain)

    def to_quot(S: Subspace) -> Subspace:
        vecs = [[Ls.reduce(b)[j] for j in q] for b in S.basis]
        return Subspace.span(vecs, len(q), domain)

    def induced(Fl: Filtration | None, conv, ambient: int) -> Filtration | None:
        if Fl is None:
            return None
        return Filtration({n: conv(Fl.at(n)) for n in Fl.scan_range()}, ambient, Fl.decreasing, domain)

    L = BifilteredSpace(k, induced(M.W, to_sub, k), induced(M.F, to_sub, k), None, domain)
    Q = BifilteredSpace(len(q), induced(M.W, to_quot, len(q)), induced(M.F, to_quot, len(q)), None, domain)
    f_mat = [[Ls.basis[j][i] for j in range(k)] for i in range(M.dim)]
    # column c of g is the reduction of e_c modulo L, read at the complement columns
    g_mat = [[Ls.reduce([domain.one if t == c else domain.zero for t in range(M.dim)])[j]
              for c in range(M.dim)] for j in q]
    return FilteredMap(f_mat, L, M), FilteredMap(g_mat, M, Q)


# compatibility of gradings ---------------------------------------------------


def grading_filtration_compatible(V: BifilteredSpace) -> bool:
    """For every level i, the pieces V_j meet F^i in subspaces spanning F^i."""
    if V.grading is None or V.F is None:
        raise ValidationError("grading and F are both required")
    for i in V.F.scan_range():
        Fi = V.F.at(i)
        parts = Subspace.zero(V.dim, V.domain)
        for S in V.grading.values():
            parts = parts + S.intersect(Fi)
        if parts != Fi:
            return False
    return True


# tensor, dual, direct sum -----------------------------------------------------


def _tensor_filtration(A: Filtration, B: Filtration, dA: int, dB: int, domain) -> Filtration:
    lo = A.lo + B.lo - 1
    hi = A.hi + B.hi + 1
    steps = {}
    for n in range(lo, hi + 1):
        vecs = []
        for a in range(A.lo - 1, A.hi + 2):
            Sa = A.at(a)
            Sb = B.at(n - a)
            for u in Sa.basis:
                for v in Sb.basis:
                    vecs.append(kron_vec(u, v))
        steps[n] = Subspace.span(vecs, dA * dB, domain)
    return Filtration(steps, dA * dB, A.decreasing, domain)


def _key_add(a, b):
    if isinstance(a, tuple):
        return tuple(x + y for x, y in zip(a, b))
    return a + b


def _key_neg(a):
    if isinstance(a, tuple):
        return tuple(-x for x in a)
    return -a


def tensor(V: BifilteredSpace, U: BifilteredSpace) -> BifilteredSpace:
    domain = V.domain
    W = _tensor_filtration(V.W, U.W, V.dim, U.dim, domain)
    F = None
    if V.F is not None or U.F is not None:
        FV = V.F or Filtration.trivial(V.dim, domain, True)
        FU = U.F or Filtration.trivial(U.dim, domain, True)
        F = _tensor_filtration(FV, FU, V.dim, U.dim, domain)
    grading = None
    if V.grading is not None and U.grading is not None:
        vecs: dict = {}
        for a, Sa in V.grading.items():
            for b, Sb in U.grading.items():
                key = _key_add(a, b)
                for u in Sa.basis:
                    for v in Sb.basis:
                        vecs.setdefault(key, []).append(kron_vec(u, v))
        grading = {k: Subspace.span(vs, V.dim * U.dim, domain) for k, vs in sorted(vecs.items())}
    return BifilteredSpace(V.dim * U.dim, W, F, grading, domain)


def dual(V: BifilteredSpace) -> BifilteredSpace:
    """W_n(V*) = ann W_{-n-1}(V); F^i(V*) = ann F^{1-i}(V); grading negated."""
    domain = V.domain
    W = Filtration({n: V.W.at(-n - 1).annihilator() for n in range(-V.W.hi - 1, -V.W.lo + 2)},
                   V.dim, False, domain)
    F = None
    if V.F is not None:
        F = Filtration({i: V.F.at(1 - i).annihilator() for i in range(-V.F.hi - 1, -V.F.lo + 3)},
                       V.dim, True, domain)
    grading = None
    if V.grading is not None:
        grading = {}
        for k, S in V.grading.items():
            others = Subspace.zero(V.dim, domain)
            for k2, S2 in V.grading.items():
                if k2 != k:
                    others = others + S2
            grading[_key_neg(k)] = others.annihilator()
        grading = dict(sorted(grading.items()))
    return BifilteredSpace(V.dim, W, F, grading, domain)


def _sum_filtration(A: Filtration, B: Filtration, dA: int, dB: int, domain) -> Filtration:
    lo = min(A.lo, B.lo) - 1
    hi = max(A.hi, B.hi) + 1
    steps = {}
    for n in range(lo, hi + 1):
        vecs = [list(u) + [domain.zero] * dB for u in A.at(n).basis]
        vecs += [[domain.zero] * dA + list(v) for v in B.at(n).basis]
        steps[n] = Subspace.span(vecs, dA + dB, domain)
    return Filtration(steps, dA + dB, A.decreasing, domain)


def direct_sum(V: BifilteredSpace, U: BifilteredSpace) -> BifilteredSpace:
    domain = V.domain
    W = _sum_filtration(V.W, U.W, V.dim, U.dim, domain)
    F = None
    if V.F is not None or U.F is not None:
        FV = V.F or Filtration.trivial(V.dim, domain, True)
        FU = U.F or Filtration.trivial(U.dim, domain, True)
        F = _sum_filtration(FV, FU, V.dim, U.dim, domain)
    grading = None
    if V.grading is not None and U.grading is not None:
        grading = {}
        for k in sorted(set(V.grading) | set(U.grading)):
            vecs = []
            if k in V.grading:
                vecs += [list(u) + [domain.zero] * U.dim for u in V.grading[k].basis]
            if k in U.grading:
                vecs += [[domain.zero] * V.dim + list(v) for v in U.grading[k].basis]
            grading[k] = Subspace.span(vecs, V.dim + U.dim, domain)
    return BifilteredSpace(V.dim + U.dim, W, F, grading, domain)


def weight_support(V: BifilteredSpace) -> set[int]:
    return set(V.W.jumps())


def supports_disjoint(V: BifilteredSpace, U: BifilteredSpace) -> bool:
    """A W-filtered map between spaces with disjoint weight supports is zero."""
    return not (weight_support(V) & weight_support(U))


# serialization -------------------------------------------------------------


def _basis_json(S: Subspace, domain):
    return [[domain.to_json(x) for x in row] for row in S.basis]


def space_to_json(V: BifilteredSpace) -> dict:
    d = V.domain
    out = {
        "dim": V.dim,
        "W": [{"weight": n, "basis": _basis_json(S, d)} for n, S in V.W.steps],
    }
    if V.F is not None:
        out["F"] = [{"level": i, "basis": _basis_json(S, d)} for i, S in V.F.steps]
    if V.grading is not None:
        out["grading"] = [
            {("weights" if isinstance(k, tuple) else "weight"): (list(k) if isinstance(k, tuple) else k),
             "basis": _basis_json(S, d)}
            for k, S in V.grading.items()
        ]
    return out


def space_from_json(obj: dict, domain=QQ) -> BifilteredSpace:
    n = int(obj["dim"])

    def sub(rows):
        return Subspace.span([[domain(x) for x in r] for r in rows], n, domain)

    W = Filtration({int(e["weight"]): sub(e["basis"]) for e in obj["W"]}, n, False, domain)
    F = None
    if obj.get("F"):
        F = Filtration({int(e["level"]): sub(e["basis"]) for e in obj["F"]}, n, True, domain)
    grading = None
    if obj.get("grading"):
        grading = {}
        for e in obj["grading"]:
            key = tuple(e["weights"]) if "weights" in e else int(e["weight"])
            grading[key] = sub(e["basis"])
    return BifilteredSpace(n, W, F, grading, domain)
