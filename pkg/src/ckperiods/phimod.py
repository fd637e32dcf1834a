"""Weight-filtered modules with a linear Frobenius and their canonical splitting.

The splitting of W is the unique one commuting with the Frobenius.  It is built
weight by weight: on W_n = W_{n-1} + (section of gr_n) the Frobenius has block
form [[A, B], [0, D]], and the stable lift of gr_n is the graph of the solution
X of the Sylvester equation A X - X D = -B.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BesserConditionError,
    NoSolutionError,
    SpectraNotDisjointError,
    ValidationError,
)
from .filtlin import BifilteredSpace, SectionSplitting, Subspace, gr_W, space_from_json, space_to_json, tensor
from .scalars.domain import PadicField, domain_of
from .scalars.linalg import (
    charpoly,
    det,
    identity,
    kron,
    matmul,
    matvec,
    nz,
    resultant,
    solve_linear,
    transpose,
)
from .scalars.padic import INF


@dataclass
class PhiModule:
    space: BifilteredSpace
    phi: list

    @property
    def domain(self):
        return self.space.domain

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def weights(self) -> list[int]:
        return self.space.W.jumps()

    def apply(self, v):
        return matvec(self.phi, v)

    def to_json(self) -> dict:
        d = self.domain
        return {
            "space": space_to_json(self.space),
            "phi": [[d.to_json(x) for x in row] for row in self.phi],
            "weights": self.weights,
        }

    @classmethod
    def from_json(cls, obj: dict, domain) -> "PhiModule":
        space = space_from_json(obj["space"], domain)
        phi = [[domain(x) for x in row] for row in obj["phi"]]
        M = cls(space, phi)
        if "weights" in obj and list(obj["weights"]) != M.weights:
            raise ValidationError("declared weights differ from the jumps of W",
                                  {"declared": obj["weights"], "jumps": M.weights})
        return M


@dataclass
class WeightSplitting(SectionSplitting):
    """Frobenius-equivariant lifts of the echelon sections of each gr_n."""

    module: PhiModule = None
    graded_phi: dict = field(default_factory=dict)
    loss: int = 0

    def gr_phi_matrix(self):
        blocks = [self.graded_phi[n] for n in self.weights]
        size = sum(len(b) for b in blocks)
        d = self.module.domain
        out = [[d.zero] * size for _ in range(size)]
        off = 0
        for b in blocks:
            for i, row in enumerate(b):
                for j, x in enumerate(row):
                    out[off + i][off + j] = x
            off += len(b)
        return out

    def equivariance_residual(self):
        """phi o s - s o gr(phi); zero exactly when the splitting is equivariant."""
        S = self.matrix()
        left = matmul(self.module.phi, S)
        right = matmul(S, self.gr_phi_matrix())
        return [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(left, right)]

    def is_equivariant(self) -> bool:
        return not any(nz(x) for row in self.equivariance_residual() for x in row)

    def to_json(self) -> dict:
        d = self.module.domain
        return {
            "weights": self.weights,
            "lifts": {str(n): [[d.to_json(x) for x in v] for v in self.lifts[n]] for n in self.weights},
            "loss": self.loss,
        }


def _coords_in(S: Subspace, v):
    return [v[pc] for pc in S.pivots]


def _gr_blocks(M: PhiModule):
    """For each weight: (W_{n-1}, sections of gr_n, A, B, D) in echelon coordinates."""
    G = gr_W(M.space)
    out = {}
    for n in M.weights:
        Bsp = M.space.W.at(n - 1)
        Csp = G.section_spaces[n]
        A = transpose([_coords_in(Bsp, M.apply(b)) for b in Bsp.basis]) if Bsp.dim else []
        Bcols, Dcols = [], []
        for c in Csp.basis:
            v = M.apply(c)
            b = _coords_in(Bsp, v)
            rem = Bsp.reduce(v)
            Bcols.append(b)
            Dcols.append([rem[q] for q in Csp.pivots])
        Bm = transpose(Bcols) if Bsp.dim else []
        D = transpose(Dcols)
        out[n] = (Bsp, Csp, A, Bm, D)
    return out


def solve_sylvester(A, D, Bm, domain):
    """X with A X - X D = -Bm, as one flat linear system; returns (X, loss)."""
    a, d = len(A), len(D)
    rows = []
    rhs = []
    for i in range(a):
        for j in range(d):
            row = [domain.zero] * (a * d)
            for k in range(a):
                if nz(A[i][k]):
                    row[j * a + k] = row[j * a + k] + A[i][k]
            for l in range(d):
                if nz(D[l][j]):
                    row[l * a + i] = row[l * a + i] - D[l][j]
            rows.append(row)
            rhs.append(-Bm[i][j])
    try:
        sol = solve_linear(rows, rhs, domain)
    except NoSolutionError as exc:
        raise SpectraNotDisjointError("Sylvester system is inconsistent") from exc
    if sol.rank < a * d:
        raise SpectraNotDisjointError("Sylvester operator is singular at working precision",
                                      {"rank": sol.rank, "size": a * d})
    X = [[sol.x[j * a + i] for j in range(d)] for i in range(a)]
    return X, sol.loss


def frobenius_splitting(M: PhiModule) -> WeightSplitting:
    domain = M.domain
    lifts, graded_phi, sections = {}, {}, {}
    loss = 0
    for n, (Bsp, Csp, A, Bm, D) in _gr_blocks(M).items():
        graded_phi[n] = D
        sections[n] = [list(c) for c in Csp.basis]
        if Bsp.dim == 0:
            lifts[n] = [list(c) for c in Csp.basis]
            continue
        X, l = solve_sylvester(A, D, Bm, domain)
        loss = max(loss, l)
        out = []
        for j, c in enumerate(Csp.basis):
            v = list(c)
            for i, b in enumerate(Bsp.basis):
                if nz(X[i][j]):
                    v = [x + X[i][j] * y for x, y in zip(v, b)]
            out.append(v)
        lifts[n] = out
    if isinstance(domain, PadicField):
        # the ledger also charges digits lost while echelonizing W
        prec = min((domain.relative_precision(x) for vs in lifts.values() for v in vs for x in v), default=INF)
        if prec != INF:
            loss = max(loss, domain.N - prec)
    return WeightSplitting(M.dim, domain, lifts, sections, M, graded_phi, loss)


def phi_fixed_lift(E: PhiModule):
    """The unique phi-fixed vector of E projecting to the unit section of gr_0.

    E presents an extension of the unit object by M = W_{-1} E: its top weight is
    0, gr_0 is a line, and phi acts on it by 1.
    """
    domain = E.domain
    blocks = _gr_blocks(E)
    if not blocks or max(blocks) != 0:
        raise ValidationError("extension must have top weight 0")
    Bsp, Csp, A, Bm, D = blocks[0]
    if Csp.dim != 1 or D[0][0] != domain.one:
        raise ValidationError("gr_0 must be a line on which phi acts by 1")
    e0 = list(Csp.basis[0])
    if Bsp.dim == 0:
        return e0
    a = Bsp.dim
    AmI = [[A[i][j] - (domain.one if i == j else domain.zero) for j in range(a)] for i in range(a)]
    rhs = [-x for x in _coords_in(Bsp, [u - v for u, v in zip(E.apply(e0), e0)])]
    try:
        sol = solve_linear(AmI, rhs, domain)
    except NoSolutionError as exc:
        raise BesserConditionError("phi - 1 is not invertible on W_-1") from exc
    if sol.rank < a:
        raise BesserConditionError("phi - 1 is not invertible on W_-1", {"rank": sol.rank, "dim": a})
    e = e0
    for xi, b in zip(sol.x, Bsp.basis):
        if nz(xi):
            e = [u + xi * w for u, w in zip(e, b)]
    return e


def tensor_module(M: PhiModule, N: PhiModule) -> PhiModule:
    return PhiModule(tensor(M.space, N.space), kron(M.phi, N.phi))


def tensor_splitting_consistency(M: PhiModule, N: PhiModule) -> bool:
    sM, sN = frobenius_splitting(M), frobenius_splitting(N)
    sMN = frobenius_splitting(tensor_module(M, N))
    expected: dict = {}
    for a in sM.weights:
        for b in sN.weights:
            for u in sM.lifts[a]:
                for v in sN.lifts[b]:
                    expected.setdefault(a + b, []).append([x * y for x in u for y in v])
    if sorted(expected) != sMN.weights:
        return False
    dim = M.dim * N.dim
    return all(Subspace.span(vs, dim, M.domain) == sMN.component(n) for n, vs in expected.items())


# diagnostics ---------------------------------------------------------------


def newton_slopes(coeffs, domain) -> list | None:
    """Valuations of the roots of a polynomial (lowest degree first), p-adic only."""
    if not isinstance(domain, PadicField):
        return None
    pts = [(i, domain.valuation(c)) for i, c in enumerate(coeffs) if domain.valuation(c) != INF]
    hull = []
    for pt in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out.extend([-Fraction(y2 - y1, x2 - x1)] * (x2 - x1))
    zeros_at_origin = pts[0][0] if pts else 0
    return [INF] * zeros_at_origin + sorted(out)


@dataclass
class PhiReport:
    w_stable: bool
    spectra_disjoint: bool
    besser: bool
    resultants: dict
    slopes: dict
    slopes_match: dict

    @property
    def ok(self) -> bool:
        return self.w_stable and self.spectra_disjoint and self.besser

    def flags(self) -> list[str]:
        out = []
        if not self.w_stable:
            out.append("W_NOT_STABLE")
        if not self.spectra_disjoint:
            out.append(SpectraNotDisjointError.name)
        if not self.besser:
            out.append(BesserConditionError.name)
        return out

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "flags": self.flags(),
            "w_stable": self.w_stable,
            "spectra_disjoint": self.spectra_disjoint,
            "besser": self.besser,
            "resultants": self.resultants,
            "newton_slopes": {str(k): None if v is None else [str(s) for s in v] for k, v in self.slopes.items()},
            "slopes_match_weight": {str(k): v for k, v in self.slopes_match.items()},
        }


def validate_phimodule(M: PhiModule) -> PhiReport:
    domain = M.domain
    W = M.space.W
    stable = all(
        all(W.at(n).contains(M.apply(b)) for b in W.at(n).basis) for n in W.scan_range()
    )
    if not stable:
        return PhiReport(False, False, False, {}, {}, {})
    blocks = _gr_blocks(M)
    polys = {n: charpoly(D) for n, (_, _, _, _, D) in blocks.items()}
    resultants = {}
    disjoint = True
    ws = sorted(polys)
    for i, m in enumerate(ws):
        for n in ws[i + 1:]:
            r = resultant(polys[m], polys[n], domain)
            resultants[f"{m},{n}"] = domain.to_json(r)
            if not nz(r):
                disjoint = False
    Wm = W.at(-1)
    besser = True
    if Wm.dim:
        A = transpose([_coords_in(Wm, M.apply(b)) for b in Wm.basis])
        AmI = [[A[i][j] - (domain.one if i == j else domain.zero) for j in range(Wm.dim)] for i in range(Wm.dim)]
        besser = nz(det(AmI, domain))
    slopes, match = {}, {}
    for n, f in polys.items():
        s = newton_slopes(f, domain)
        slopes[n] = s
        if s is not None and len(set(s)) == 1:
            match[n] = s[0] == Fraction(n, 2)
    return PhiReport(True, disjoint, besser, resultants, slopes, match)


def graded_module(weights, eigenvalues, domain) -> PhiModule:
    """Coordinate-graded module with diagonal phi (helper for scenarios and tests)."""
    space = BifilteredSpace.coordinate(list(weights), domain)
    n = len(weights)
    phi = identity(n, domain.one)
    for i, lam in enumerate(eigenvalues):
        phi[i] = [domain(lam) if j == i else domain.zero for j in range(n)]
    return PhiModule(space, phi)


def module_from_matrix(phi, weights, domain=None) -> PhiModule:
    """Module on k^n with W_n spanned by basis vectors of weight <= n."""
    domain = domain or domain_of(phi)
    phi = [[domain(x) for x in row] for row in phi]
    return PhiModule(BifilteredSpace.coordinate(list(weights), domain), phi)
