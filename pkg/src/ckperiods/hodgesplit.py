"""Weight splittings compatible with the Hodge filtration.

For each weight j, gr_j carries the induced filtration F(gr_j).  A basis of gr_j
adapted to it is chosen greedily from the top level down; each basis vector at
level i is lifted into F^i meet W_j.  The span of the lifts is V_j.  Different
lift choices differ by an element of the group of unipotent automorphisms that
lower W and preserve F, which ``compare_splittings`` returns explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import IdentityViolationError, InputsNotSplittingsError, ValidationError
from .filtlin import (
    BifilteredSpace,
    SectionSplitting,
    Subspace,
    gr_W,
    grading_filtration_compatible,
    is_unipotent_splitting,
)
from .scalars.linalg import inverse, matmul, matvec, nz, solve_linear, transpose


@dataclass
class HodgeSplitting(SectionSplitting):
    space: BifilteredSpace = None

    def grading(self) -> dict:
        return self.components()

    def graded_space(self) -> BifilteredSpace:
        return self.space.with_grading(self.components())

    def to_json(self) -> dict:
        d = self.domain
        return {
            "grading": [{"weight": n, "basis": [[d.to_json(x) for x in row] for row in self.component(n).basis]}
                        for n in self.weights]
        }


def _f_trivial(V: BifilteredSpace) -> bool:
    return V.F is None or all(S.dim in (0, V.dim) for _, S in V.F.steps)


def _splitting_from_component_lifts(V: BifilteredSpace, G, comp_lifts: dict) -> HodgeSplitting:
    """Turn arbitrary lifts spanning V_j into lifts of the echelon sections."""
    domain = V.domain
    lifts, sections = {}, {}
    for n, vecs in comp_lifts.items():
        sec = G.sections[n]
        sections[n] = [list(s) for s in sec]
        # Y: projections of the lifts; the lift of section e_k is L Y^{-1} e_k
        Y = transpose([G.project(n, v) for v in vecs])
        Yinv = inverse(Y, domain)
        L = transpose(vecs)
        lifts[n] = [matvec(L, [row[k] for row in Yinv]) for k in range(len(sec))]
    return HodgeSplitting(V.dim, domain, lifts, sections, V)


def hodge_weight_splitting(V: BifilteredSpace) -> HodgeSplitting:
    domain = V.domain
    G = gr_W(V)
    if _f_trivial(V):
        lifts = {n: [list(s) for s in G.sections[n]] for n in G.sections}
        return HodgeSplitting(V.dim, domain, lifts, {n: [list(s) for s in G.sections[n]] for n in G.sections}, V)
    comp_lifts = {}
    for j, comp in G.components.items():
        Fj = comp.F
        Wj = V.W.at(j)
        chosen = Subspace.zero(comp.dim, domain)
        vecs = []
        for i in range(Fj.hi + 1, Fj.lo - 2, -1):
            level = Fj.at(i)
            if chosen.dim == level.dim:
                continue
            K = V.F.at(i).intersect(Wj)
            proj = transpose([G.project(j, k) for k in K.basis])
            for y in level.basis:
                if chosen.contains(y):
                    continue
                chosen = chosen + Subspace.span([y], comp.dim, domain)
                sol = solve_linear(proj, list(y), domain)
                v = [domain.zero] * V.dim
                for a, k in zip(sol.x, K.basis):
                    if nz(a):
                        v = [x + a * b for x, b in zip(v, k)]
                vecs.append(v)
        comp_lifts[j] = vecs
    s = _splitting_from_component_lifts(V, G, comp_lifts)
    if not is_hodge_splitting(V, s.components()):
        raise IdentityViolationError("constructed grading fails the splitting postconditions")
    return s


def is_hodge_splitting(V: BifilteredSpace, components: dict) -> bool:
    if not is_unipotent_splitting(V, components):
        return False
    if V.F is None:
        return True
    return grading_filtration_compatible(V.with_grading(components))


def splitting_from_grading(V: BifilteredSpace, components: dict) -> HodgeSplitting:
    """HodgeSplitting object for a user-supplied grading (not checked against F)."""
    if not is_unipotent_splitting(V, components):
        raise InputsNotSplittingsError("grading is not a splitting of W")
    G = gr_W(V)
    return _splitting_from_component_lifts(V, G, {n: S.basis for n, S in components.items() if S.dim})


def cocharacter_matrix(components: dict, z, domain):
    """The operator acting by z^j on the j-th piece."""
    cols, diag = [], []
    for j, S in sorted(components.items()):
        for b in S.basis:
            cols.append(b)
            diag.append(domain(z) ** j)
    T = transpose(cols)
    D = [[diag[i] if i == k else domain.zero for k in range(len(diag))] for i in range(len(diag))]
    return matmul(matmul(T, D), inverse(T, domain))


def splitting_cocharacter_check(V: BifilteredSpace, components: dict, samples=(2, 3)) -> bool:
    """Whether z -> (z^j on V_j) preserves every F^i at the sample points."""
    if V.F is None:
        return True
    for z in samples:
        Lz = cocharacter_matrix(components, z, V.domain)
        for i in V.F.scan_range():
            Fi = V.F.at(i)
            if not all(Fi.contains(matvec(Lz, b)) for b in Fi.basis):
                return False
    return True


def _is_w_lowering_unipotent(V: BifilteredSpace, u) -> bool:
    N = [[x - (1 if i == j else 0) for j, x in enumerate(row)] for i, row in enumerate(u)]
    for n in V.W.scan_range():
        target = V.W.at(n - 1)
        if not all(target.contains(matvec(N, b)) for b in V.W.at(n).basis):
            return False
    return True


def _preserves_f(V: BifilteredSpace, u) -> bool:
    if V.F is None:
        return True
    for i in V.F.scan_range():
        Fi = V.F.at(i)
        if not all(Fi.contains(matvec(u, b)) for b in Fi.basis):
            return False
    return True


def compare_splittings(s1: HodgeSplitting, s2: HodgeSplitting):
    """The unique unipotent u with u(V_j of s1) = V_j of s2 compatibly with gr."""
    V = s1.space
    if V is None or s2.space is None or s1.dim != s2.dim:
        raise InputsNotSplittingsError("splittings of different spaces")
    for s in (s1, s2):
        if not is_hodge_splitting(V, s.components()):
            raise InputsNotSplittingsError("input is not a Hodge-filtered weight splitting")
    u = matmul(s2.automorphism(), inverse(s1.automorphism(), V.domain))
    if not _is_w_lowering_unipotent(V, u):
        raise IdentityViolationError("comparison is not unipotent for W")
    if not _preserves_f(V, u):
        raise IdentityViolationError("comparison does not preserve F")
    return u


def check_dimension_identity(V: BifilteredSpace) -> bool:
    """dim F^i V equals the sum over weights of dim F^i gr_j V, for every i."""
    if V.F is None:
        raise ValidationError("F is required")
    G = gr_W(V)
    return all(V.F.at(i).dim == sum(c.F.at(i).dim for c in G.components.values())
               for i in V.F.scan_range())
