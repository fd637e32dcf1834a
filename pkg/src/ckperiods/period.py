"""Unipotent period loops, the period homomorphism, the Bloch-Kato logarithm of
extensions of the unit object, and the a_M coordinate map.

A period scenario is one p-adic (or rational) vector space V carrying a weight
filtration, a Frobenius phi and a Hodge filtration F, together with a graded
unipotent group U acting on V through a matrix representation.  The torus
bookkeeping fixes the graded objects: basis vector e_b has multiweight m_b,
weight w(m_b), Hodge level h(m_b) and graded Frobenius lambda^(m_b).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    IdentityViolationError,
    NoF0LiftError,
    ValidationError,
)
from .filtlin import BifilteredSpace, Filtration, Subspace, gr_W
from .hodgesplit import HodgeSplitting, hodge_weight_splitting, is_hodge_splitting, splitting_from_grading
from .phimod import PhiModule, WeightSplitting, frobenius_splitting, phi_fixed_lift
from .poly import Polynomial
from .scalars.domain import PadicField
from .scalars.linalg import exp_nilpotent, inverse, matmul, matvec, nz
from .scalars.padic import INF
from .uni.group import GroupElement
from .uni.lie import GradedLieAlgebra
from .uni.reps import Representation


@dataclass(frozen=True)
class TorusData:
    """Split torus with linear weight and Hodge functionals and Frobenius values."""

    rank: int
    weight: tuple
    hodge: tuple
    frobenius: tuple

    def weight_of(self, m) -> int:
        return sum(a * b for a, b in zip(self.weight, m))

    def hodge_of(self, m) -> int:
        return sum(a * b for a, b in zip(self.hodge, m))

    def frobenius_of(self, m, domain):
        out = domain.one
        for lam, k in zip(self.frobenius, m):
            if k:
                out = out * domain(lam) ** k
        return out

    def check_algebra(self, alg: GradedLieAlgebra, label: str) -> list[str]:
        issues = []
        if alg.multiweights is None:
            return [f"{label}: basis carries no multiweights"]
        for name, w, m in zip(alg.names, alg.weights, alg.multiweights):
            if len(m) != self.rank:
                issues.append(f"{label}: multiweight of {name} has length {len(m)}, torus rank is {self.rank}")
            elif self.weight_of(m) != w:
                issues.append(f"{label}: weight of {name} is {w} but its multiweight gives {self.weight_of(m)}")
        return issues

    def to_json(self, domain) -> dict:
        return {"rank": self.rank, "weight": list(self.weight), "hodge": list(self.hodge),
                "frobenius": [domain.to_json(domain(x)) for x in self.frobenius]}


def graded_hodge_filtration(levels, domain) -> Filtration:
    """F^i spanned by the basis vectors of Hodge level >= i."""
    n = len(levels)
    if not n:
        return Filtration.trivial(0, domain, decreasing=True)
    lo, hi = min(levels), max(levels)
    steps = {}
    for i in range(lo, hi + 2):
        vecs = [[domain.one if j == b else domain.zero for j in range(n)] for b in range(n) if levels[b] >= i]
        steps[i] = Subspace.span(vecs, n, domain)
    return Filtration(steps, n, True, domain)


def _diag(vals, domain):
    n = len(vals)
    return [[vals[i] if i == j else domain.zero for j in range(n)] for i in range(n)]


def _is_identity(M) -> bool:
    return all(not nz(x - (1 if i == j else 0)) for i, row in enumerate(M) for j, x in enumerate(row))


@dataclass
class PeriodScenario:
    U: GradedLieAlgebra
    torus: TorusData
    multiweights: list
    rep: Representation
    phi: list
    F: Filtration
    domain: object
    _space: BifilteredSpace | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.multiweights)

    @property
    def weights(self) -> list[int]:
        return [self.torus.weight_of(m) for m in self.multiweights]

    @property
    def hodge_levels(self) -> list[int]:
        return [self.torus.hodge_of(m) for m in self.multiweights]

    @property
    def space(self) -> BifilteredSpace:
        if self._space is None:
            base = BifilteredSpace.coordinate(self.weights, self.domain)
            self._space = base.with_F(self.F)
        return self._space

    @property
    def module(self) -> PhiModule:
        return PhiModule(self.space, self.phi)

    def graded_phi(self):
        return _diag([self.torus.frobenius_of(m, self.domain) for m in self.multiweights], self.domain)

    def graded_F(self) -> Filtration:
        return graded_hodge_filtration(self.hodge_levels, self.domain)

    @classmethod
    def from_paths(cls, U, torus, multiweights, rep, c, h, domain) -> "PeriodScenario":
        """phi = rho(c) phi_gr rho(c)^-1 and F = rho(h) F_gr for chosen c, h in U."""
        multiweights = [tuple(m) for m in multiweights]
        tmp = cls(U, torus, multiweights, rep, None, None, domain)
        C = rep.exp([domain(x) for x in c])
        H = rep.exp([domain(x) for x in h])
        phi = matmul(matmul(C, tmp.graded_phi()), inverse(C, domain))
        Fg = tmp.graded_F()
        F = Filtration({i: S.image(H) for i, S in Fg.steps}, tmp.dim, True, domain)
        return cls(U, torus, multiweights, rep, phi, F, domain)

    def frobenius_element(self) -> list:
        """Coordinates of Phi in U with phi = rho(Phi) phi_gr."""
        D = self.graded_phi()
        Dinv = _diag([self.domain.one / D[i][i] for i in range(self.dim)], self.domain)
        return self.rep.pullback(matmul(self.phi, Dinv), self.domain)

    def validate(self) -> list[str]:
        issues = list(self.torus.check_algebra(self.U, "U"))
        n = self.dim
        for m in self.multiweights:
            if len(m) != self.torus.rank:
                issues.append(f"space multiweight {list(m)} does not match torus rank {self.torus.rank}")
        if issues:
            return issues
        for b, M in enumerate(self.rep.matrices):
            mb = self.U.multiweights[b]
            for i in range(n):
                for j in range(n):
                    if nz(M[i][j]):
                        target = tuple(x + y for x, y in zip(self.multiweights[j], mb))
                        if tuple(self.multiweights[i]) != target:
                            issues.append(f"representation of {self.U.names[b]} is not torus-equivariant at ({i},{j})")
        if not self.rep.is_faithful():
            issues.append("representation is not faithful at this depth")
        issues.extend(self.space.validate())
        W = self.space.W
        for k in W.jumps():
            Wk = W.at(k)
            if not all(Wk.contains(matvec(self.phi, v)) for v in Wk.basis):
                issues.append(f"phi does not stabilize W_{k}")
        if issues:
            return issues
        D = self.graded_phi()
        for i in range(n):
            for j in range(n):
                if self.weights[i] == self.weights[j]:
                    if nz(self.phi[i][j] - D[i][j]):
                        issues.append(f"gr(phi) differs from the torus Frobenius at entry ({i},{j})")
        G = self.graded_F()
        for i in range(G.lo, G.hi + 1):
            mine = gr_dims(self.space, self.F, i)
            want = gr_dims(self.space, G, i)
            if mine != want:
                issues.append(f"gr_W F^{i} has dimensions {mine}, the torus Hodge levels give {want}")
        return issues


def gr_dims(V: BifilteredSpace, F: Filtration, i: int) -> dict:
    out = {}
    Fi = F.at(i)
    for n in V.W.jumps():
        out[n] = Fi.intersect(V.W.at(n)).dim - Fi.intersect(V.W.at(n - 1)).dim
    return out


@dataclass
class PeriodLoop:
    """Left and right loops uL = tau_cr tau_H^-1 and uR = tau_H tau_cr^-1 in U."""

    U: GradedLieAlgebra
    uL: list
    uR: list
    crystalline: list
    hodge: list
    frobenius_splitting: WeightSplitting
    hodge_splitting: HodgeSplitting
    domain: object

    def element(self, coords) -> GroupElement:
        return GroupElement(self.U, coords)

    @property
    def uL_graded(self) -> list:
        """tau_H^-1 tau_cr, the loop read on the graded side."""
        return (self.element(self.hodge).inverse() * self.element(self.crystalline)).coords

    @property
    def uR_graded(self) -> list:
        return (self.element(self.crystalline).inverse() * self.element(self.hodge)).coords

    def precision(self):
        return min_relative_precision(self.uL + self.uR, self.domain)

    def to_json(self) -> dict:
        d = self.domain
        return {
            "uL": [d.to_json(x) for x in self.uL],
            "uR": [d.to_json(x) for x in self.uR],
            "tau_cr": [d.to_json(x) for x in self.crystalline],
            "tau_H": [d.to_json(x) for x in self.hodge],
            "basis": list(self.U.names),
            "precision": _prec_json(self.precision()),
        }


def min_relative_precision(values, domain):
    best = INF
    for x in values:
        if nz(x):
            best = min(best, domain.relative_precision(x))
    return best


def agreement_precision(a, b, domain):
    """k such that a = b mod p^k is certified (absolute precision of a - b); INF over Q."""
    if not isinstance(domain, PadicField):
        return INF
    diff = domain(a) - domain(b)
    return diff.absprec if domain.valuation(diff) == INF else domain.valuation(diff)


def _prec_json(p):
    return None if p == INF else p


def assemble_period_loop(s: PeriodScenario, hodge: HodgeSplitting | None = None) -> PeriodLoop:
    d = s.domain
    cr = frobenius_splitting(s.module)
    H = hodge if hodge is not None else hodge_weight_splitting(s.space)
    S_cr, S_H = cr.automorphism(), H.automorphism()
    S_H_inv, S_cr_inv = inverse(S_H, d), inverse(S_cr, d)
    c_cr = s.rep.pullback(S_cr, d)
    h = s.rep.pullback(S_H, d)
    uL = s.rep.pullback(matmul(S_cr, S_H_inv), d)
    uR = s.rep.pullback(matmul(S_H, S_cr_inv), d)
    loop = PeriodLoop(s.U, uL, uR, c_cr, h, cr, H, d)
    if not (loop.element(uL) * loop.element(uR)).is_identity():
        raise IdentityViolationError("uL * uR is not the identity",
                                     {"uL": [d.to_json(x) for x in uL], "uR": [d.to_json(x) for x in uR]})
    return loop


def second_hodge_splitting(s: PeriodScenario, loop: PeriodLoop, f0_coords) -> HodgeSplitting:
    """The Hodge splitting tau_H * f for f in F^0 U (coordinates supported on Hodge level >= 0)."""
    U = s.U
    for b, x in enumerate(f0_coords):
        if nz(x) and s.torus.hodge_of(U.multiweights[b]) < 0:
            raise ValidationError(f"coordinate {U.names[b]} is not in F^0 U")
    h2 = (loop.element(loop.hodge) * loop.element(list(f0_coords))).coords
    A = s.rep.exp(h2)
    comps = {}
    for n in sorted(set(s.weights)):
        cols = [[A[i][b] for i in range(s.dim)] for b in range(s.dim) if s.weights[b] == n]
        comps[n] = Subspace.span(cols, s.dim, s.domain)
    if not is_hodge_splitting(s.space, comps):
        raise IdentityViolationError("translate of the Hodge splitting by F^0 U is not a Hodge splitting")
    return splitting_from_grading(s.space, comps)


def f0_coordinates_of_U(s: PeriodScenario) -> list[int]:
    return [b for b in range(s.U.dim) if s.torus.hodge_of(s.U.multiweights[b]) >= 0]


# coordinate functions and the period homomorphism ---------------------------


def coordinate_variables(U: GradedLieAlgebra) -> tuple:
    return tuple(f"u{b + 1}" for b in range(U.dim))


def period_homomorphism(loop: PeriodLoop, f: Polynomial, side: str = "L"):
    """per^L(f) = f(uL) (or f(uR) for the right-hand loop)."""
    point = loop.uL if side == "L" else loop.uR
    return f.evaluate(point)


# extensions of the unit object ------------------------------------------------


@dataclass
class BKLog:
    value: list
    one_cr: list
    one_H: list
    F0M: Subspace

    def to_json(self, domain) -> dict:
        return {"log": [domain.to_json(x) for x in self.value],
                "one_cr": [domain.to_json(x) for x in self.one_cr],
                "one_H": [domain.to_json(x) for x in self.one_H],
                "F0M_dim": self.F0M.dim}


def _unit_section(E: PhiModule):
    G = gr_W(E.space)
    if 0 not in G.sections or len(G.sections[0]) != 1 or max(G.sections) != 0:
        raise ValidationError("extension must have top weight 0 with a one-dimensional gr_0")
    return G, list(G.sections[0][0])


def check_extension(E: PhiModule) -> list[str]:
    issues = []
    try:
        _unit_section(E)
    except ValidationError as exc:
        return [str(exc)]
    if E.space.F is None:
        issues.append("extension carries no Hodge filtration")
    return issues


def F0_of_M(E: PhiModule) -> Subspace:
    return E.space.F.at(0).intersect(E.space.W.at(-1))


def unit_hodge_lift(E: PhiModule):
    """A vector of F^0 E projecting to the unit section; NO_F0_LIFT if none exists."""
    G, e0 = _unit_section(E)
    if E.space.F is None:
        raise NoF0LiftError("extension carries no Hodge filtration")
    F0 = E.space.F.at(0)
    for v in F0.basis:
        c = G.project(0, v)[0]
        if nz(c):
            lift = [x / c for x in v]
            # normalize within the coset by the canonical reduction mod F^0 M
            return _reduce_unit_lift(E, lift)
    raise NoF0LiftError("F^0 E does not surject onto the unit line")


def _reduce_unit_lift(E: PhiModule, v):
    F0M = F0_of_M(E)
    return F0M.reduce(v)


def bk_log(E: PhiModule, one_H=None) -> BKLog:
    """(1_cr - 1_H) modulo F^0 M, in the canonical complement of F^0 M."""
    one_cr = phi_fixed_lift(E)
    if one_H is None:
        one_H = unit_hodge_lift(E)
    F0M = F0_of_M(E)
    diff = [a - b for a, b in zip(one_cr, one_H)]
    return BKLog(F0M.reduce(diff), one_cr, one_H, F0M)


def functionals_killing_F0M(E: PhiModule) -> list:
    """Functionals on E vanishing on F^0 M and on the unit section, spanning (M / F^0 M)^*."""
    d = E.domain
    n = E.dim
    _unit_section(E)
    M = E.space.W.at(-1)
    F0M = F0_of_M(E)
    out = []
    for c in M.pivots:
        if c in F0M.pivots:
            continue
        f = [d.zero] * n
        f[c] = d.one
        out.append(_kill(f, F0M, d))
    return out


def _kill(f, F0M: Subspace, d):
    """f composed with the canonical projection v -> F0M.reduce(v), which kills F0M."""
    n = len(f)
    cols = []
    for j in range(n):
        e = [d.one if i == j else d.zero for i in range(n)]
        cols.append(sum((a * b for a, b in zip(f, F0M.reduce(e)) if nz(a) and nz(b)), d.zero))
    return cols


def apply_functional(f, v):
    total = 0
    for a, b in zip(f, v):
        if nz(a) and nz(b):
            total = total + a * b
    return total


def a_M_coordinate(s: PeriodScenario, f, one_H) -> Polynomial:
    """The coordinate function u -> f(-1_H + u(1_H)) on U as a polynomial in exponential coordinates."""
    vars_ = coordinate_variables(s.U)
    gens = Polynomial.generators(vars_)
    X = [[0] * s.dim for _ in range(s.dim)]
    for b, t in enumerate(gens):
        M = s.rep.matrices[b]
        for i in range(s.dim):
            for j in range(s.dim):
                if nz(M[i][j]):
                    X[i][j] = X[i][j] + t * M[i][j]
    E = exp_nilpotent(X)
    img = matvec(E, list(one_H))
    vec = [a - b for a, b in zip(img, one_H)]
    out = apply_functional(f, vec)
    if not isinstance(out, Polynomial):
        out = Polynomial.constant(vars_, out)
    return out


@dataclass
class PeriodsBKReport:
    ok: bool
    records: list

    def to_json(self) -> dict:
        return {"ok": self.ok, "records": self.records}


def verify_periods_bk(s: PeriodScenario, loop: PeriodLoop | None = None, hodge: HodgeSplitting | None = None,
                      strict: bool = True) -> PeriodsBKReport:
    """per^L(a_M(f)) = f(log_BK) for every functional f killing F^0 M."""
    d = s.domain
    loop = loop or assemble_period_loop(s, hodge)
    E = s.module
    H = loop.hodge_splitting
    G, e0 = _unit_section(E)
    one_H = matvec(H.automorphism(), e0)
    log = bk_log(E, one_H=one_H)
    records = []
    ok = True
    for k, f in enumerate(functionals_killing_F0M(E)):
        poly = a_M_coordinate(s, f, one_H)
        left = period_homomorphism(loop, poly)
        right = apply_functional(f, log.value)
        agree = not nz(left - right)
        ok = ok and agree
        records.append({"functional": [d.to_json(x) for x in f], "per_L": d.to_json(d(left)),
                        "f_log": d.to_json(d(right)), "agree": agree,
                        "precision": _prec_json(min_relative_precision([left, right], d)),
                        "agree_mod": _prec_json(agreement_precision(left, right, d))})
    if strict and not ok:
        raise IdentityViolationError("period identity fails", {"records": records})
    return PeriodsBKReport(ok, records)
