"""Torus-equivariant cocycles of a free graded U in pi, torsors, the delta
isomorphism, fixed points, the beta maps and the randomized diagram checks.

Cocycles are stored by Lie values: for each generator sigma of U a vector
xi_sigma of Lie pi of the same multiweight.  The cocycle is the homomorphism
U -> pi x| U integrating sigma -> xi_sigma + sigma, read off on the pi factor.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    BesserConditionError,
    DiagramViolationError,
    FNotSubalgebraError,
    IdentityViolationError,
    NotEffectiveError,
    ValidationError,
)
from .period import PeriodLoop, TorusData, min_relative_precision, _prec_json
from .poly import Polynomial
from .randomgen import trial_rngs
from .scalars.domain import PadicField
from .scalars.linalg import nz, rref
from .uni.bch import bch
from .uni.group import UAction, act_torus
from .uni.lie import GradedLieAlgebra


def _zero(n, domain):
    return [domain.zero] * n


def _mul(alg, x, y):
    return bch(alg, x, y)


def _inv(x):
    return [-a for a in x]


def _is_zero(v) -> bool:
    return not any(nz(a) for a in v)


def _equal(x, y) -> bool:
    return not any(nz(a - b) for a, b in zip(x, y))


# cocycles --------------------------------------------------------------------


@dataclass
class Cocycle:
    action: UAction
    values: dict
    domain: object
    _hom: list | None = field(default=None, repr=False)
    _semi: GradedLieAlgebra | None = field(default=None, repr=False)

    def __post_init__(self):
        U, pi = self.action.U, self.action.pi
        if pi.depth > U.depth:
            raise ValidationError("the depth of pi must not exceed the depth of U")
        for k in self.values:
            if not 0 <= k < len(U.generators):
                raise ValidationError(f"no generator with index {k}")

    @property
    def U(self) -> GradedLieAlgebra:
        return self.action.U

    @property
    def pi(self) -> GradedLieAlgebra:
        return self.action.pi

    def value(self, k: int):
        return self.values.get(k, _zero(self.pi.dim, self.domain))

    def check_equivariant(self) -> bool:
        U, pi = self.U, self.pi
        for k, v in self.values.items():
            m = U.multiweights[U.generators[k]]
            for i, a in enumerate(v):
                if nz(a) and pi.multiweights[i] != m:
                    return False
        return True

    def semidirect(self) -> GradedLieAlgebra:
        if self._semi is None:
            self._semi = self.action.semidirect()
        return self._semi

    def hom(self) -> list:
        """Images of the U basis in pi x| U under sigma -> xi_sigma + sigma."""
        if self._hom is None:
            S = self.semidirect()
            n = self.pi.dim
            out = []
            for b, t in enumerate(self.U.trees):
                if t[0] == "gen":
                    v = list(self.value(t[1])) + _zero(self.U.dim, self.domain)
                    v[n + b] = self.domain.one
                else:
                    v = S.bracket(out[t[1]], out[t[2]])
                out.append(v)
            self._hom = out
        return self._hom

    def evaluate(self, u):
        """c(u) in exponential coordinates of pi."""
        if _is_zero(u):
            return _zero(self.pi.dim, self.domain)
        S = self.semidirect()
        n = self.pi.dim
        X = [self.domain.zero] * S.dim
        for b, c in enumerate(u):
            if nz(c):
                X = [x + c * y if nz(y) else x for x, y in zip(X, self.hom()[b])]
        minus = _zero(n, self.domain) + [-a for a in u]
        prod = bch(S, X, minus)
        if any(nz(a) for a in prod[n:]):
            raise IdentityViolationError("cocycle evaluation left a nonzero U component")
        return prod[:n]

    def group_value(self, k: int):
        """c(exp sigma_k) in pi."""
        u = [self.domain.zero] * self.U.dim
        u[self.U.generators[k]] = self.domain.one
        return self.evaluate(u)

    def to_json(self) -> dict:
        d = self.domain
        U = self.U
        return {U.names[U.generators[k]]: [d.to_json(d(x)) if not isinstance(x, Polynomial) else str(x) for x in v]
                for k, v in sorted(self.values.items())}

    def equals(self, other: "Cocycle") -> bool:
        keys = set(self.values) | set(other.values)
        return all(_equal(self.value(k), other.value(k)) for k in keys)


def transport_evaluate(c: Cocycle, g, u):
    """(g . c)(u) = g(c(g^-1 u g)) for g in U."""
    U = c.U
    conj = bch(U, bch(U, _inv(g), u), g)
    return c.action.act(g, c.evaluate(conj))


# Selmer chart -------------------------------------------------------------------


@dataclass
class SelmerChart:
    coordinates: list
    names: list
    dim_by_level: dict

    @property
    def dim(self) -> int:
        return len(self.coordinates)

    def variables(self) -> tuple:
        return tuple(f"z{i + 1}" for i in range(self.dim))

    def to_json(self) -> dict:
        return {"dim": self.dim, "coordinates": self.names,
                "dim_by_level": {str(k): v for k, v in sorted(self.dim_by_level.items())}}


def selmer_chart(action: UAction) -> SelmerChart:
    """Free coordinates of equivariant cocycles: pi basis vectors matching each generator's multiweight."""
    U, pi = action.U, action.pi
    coords, names, levels = [], [], {}
    for k, g in enumerate(U.generators):
        for i in range(pi.dim):
            if pi.multiweights[i] == U.multiweights[g]:
                coords.append((k, i))
                names.append(f"{U.names[g]}:{pi.names[i]}")
                levels[pi.weights[i]] = levels.get(pi.weights[i], 0) + 1
    return SelmerChart(coords, names, levels)


def cocycle_from_chart(action: UAction, chart: SelmerChart, point, domain) -> Cocycle:
    values = {}
    for (k, i), x in zip(chart.coordinates, point):
        v = values.setdefault(k, [domain.zero] * action.pi.dim)
        v[i] = v[i] + x
    return Cocycle(action, values, domain)


def universal_cocycle(action: UAction, chart: SelmerChart, domain) -> Cocycle:
    vars_ = chart.variables()
    return cocycle_from_chart(action, chart, Polynomial.generators(vars_), domain)


def random_cocycle(rng, action: UAction, domain, lo: int = -3, hi: int = 3) -> Cocycle:
    chart = selmer_chart(action)
    point = [domain(int(rng.integers(lo, hi + 1))) for _ in range(chart.dim)]
    return cocycle_from_chart(action, chart, point, domain)


# torsors -------------------------------------------------------------------------


@dataclass
class Torsor:
    """pi with the U-action u * y = g0 a(u) u(g0^-1 y) and torus action t * y = g0 t(g0^-1 y)."""

    twist: Cocycle
    offset: list

    @property
    def pi(self) -> GradedLieAlgebra:
        return self.twist.pi

    @property
    def domain(self):
        return self.twist.domain

    def act_U(self, u, y):
        pi = self.pi
        g0 = self.offset
        z = _mul(pi, _inv(g0), y)
        return _mul(pi, _mul(pi, g0, self.twist.evaluate(u)), self.twist.action.act(u, z))

    def act_torus(self, t, y):
        pi = self.pi
        g0 = self.offset
        return _mul(pi, g0, act_torus(pi, t, _mul(pi, _inv(g0), y)))

    def fingerprint(self) -> str:
        d = self.domain
        blob = {"twist": self.twist.to_json(), "offset": [d.to_json(d(x)) for x in self.offset]}
        return hashlib.sha256(json.dumps(blob, sort_keys=True).encode()).hexdigest()[:16]

    def to_json(self) -> dict:
        d = self.domain
        return {"twist": self.twist.to_json(), "offset": [d.to_json(d(x)) for x in self.offset],
                "fingerprint": self.fingerprint()}


def trivial_torsor(action: UAction, domain) -> Torsor:
    return Torsor(Cocycle(action, {}, domain), _zero(action.pi.dim, domain))


def random_torsor(rng, action: UAction, domain) -> Torsor:
    a = random_cocycle(rng, action, domain)
    g0 = [domain(int(rng.integers(-2, 3))) for _ in range(action.pi.dim)]
    return Torsor(a, g0)


# fixed points ---------------------------------------------------------------------


def _check_effective(pi: GradedLieAlgebra):
    if pi.multiweights is None:
        raise NotEffectiveError("pi carries no torus multiweights")
    for name, w, m in zip(pi.names, pi.weights, pi.multiweights):
        if w >= 0 or not any(m):
            raise NotEffectiveError(f"basis element {name} has weight {w} and multiweight {list(m)}")


def generic_torus_point(pi: GradedLieAlgebra, domain) -> tuple:
    """t with t^m != 1 for every multiweight m of pi: t_i = q^(B^i) for B beyond all exponents."""
    q = domain.p if isinstance(domain, PadicField) else 2
    bound = max((abs(x) for m in pi.multiweights for x in m), default=0)
    B = 2 * bound + 1
    return tuple(domain(Fraction(q) ** (B ** i)) for i in range(len(pi.multiweights[0])))


def _character(pi, t, i, domain):
    out = domain.one
    for tk, k in zip(t, pi.multiweights[i]):
        if k:
            out = out * tk ** k
    return out


def _solve_fixed_point(pi: GradedLieAlgebra, F, chars, domain, err):
    """The y with F(y) = y, where F is affine on each weight level with linear part chars[b]."""
    y = _zero(pi.dim, domain)
    for n in sorted(set(pi.weights), reverse=True):
        level = [b for b in range(pi.dim) if pi.weights[b] == n]
        z = F(y)
        for b in level:
            denom = domain.one - chars[b]
            if not nz(denom):
                raise err(f"character of {pi.names[b]} is 1")
            y[b] = z[b] / denom
    if not _equal(F(y), y):
        raise IdentityViolationError("level-by-level solution is not a fixed point")
    return y


def gr_fixed_point(T: Torsor):
    """The unique torus-fixed point of the torsor."""
    pi, d = T.pi, T.domain
    _check_effective(pi)
    t = generic_torus_point(pi, d)
    chars = [_character(pi, t, b, d) for b in range(pi.dim)]
    return _solve_fixed_point(pi, lambda y: T.act_torus(t, y), chars, d, NotEffectiveError)


def frobenius_fixed_point(T: Torsor, frob_U, torus: TorusData):
    """The unique y with Phi * (lambda * y) = y, Phi in U the unipotent part of Frobenius."""
    pi, d = T.pi, T.domain
    _check_effective(pi)
    lam = tuple(d(x) for x in torus.frobenius)
    chars = [_character(pi, lam, b, d) for b in range(pi.dim)]
    return _solve_fixed_point(pi, lambda y: T.act_U(frob_U, T.act_torus(lam, y)), chars, d,
                              BesserConditionError)


def delta(T: Torsor) -> Cocycle:
    """c(u) = gamma^-1 (u * gamma) for the torus-fixed point gamma, stored by Lie values."""
    pi, U, d = T.pi, T.twist.U, T.domain
    gamma = gr_fixed_point(T)
    S = T.twist.semidirect()
    n = pi.dim
    values = {}
    for k, g in enumerate(U.generators):
        u = _zero(U.dim, d)
        u[g] = d.one
        cval = _mul(pi, _inv(gamma), T.act_U(u, gamma))
        z = bch(S, list(cval) + _zero(U.dim, d), _zero(n, d) + u)
        if not _equal(z[n:], u):
            raise IdentityViolationError("U component changed while recovering a Lie value")
        xi = z[:n]
        if not _is_zero(xi):
            values[k] = xi
    c = Cocycle(T.twist.action, values, d)
    if not c.check_equivariant():
        raise IdentityViolationError("recovered cocycle is not torus-equivariant")
    return c


# F^0 of pi and coset representatives ----------------------------------------------------


@dataclass
class F0Data:
    pi: GradedLieAlgebra
    rows: list
    pivots: list

    @property
    def dim(self) -> int:
        return len(self.rows)

    def complement(self) -> list[int]:
        return [i for i in range(self.pi.dim) if i not in self.pivots]


def f0_data(pi: GradedLieAlgebra, vectors, domain) -> F0Data:
    vectors = [v for v in vectors if not _is_zero(v)]
    if not vectors:
        return F0Data(pi, [], [])
    rows, piv = rref([list(v) for v in vectors], domain=domain)
    data = F0Data(pi, rows, piv)
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            br = pi.bracket(rows[i], rows[j])
            if any(nz(a) for a in _reduce_linear(data, br)):
                raise FNotSubalgebraError("F^0 is not closed under the bracket")
    return data


def _reduce_linear(F0: F0Data, v):
    r = list(v)
    for row, pc in zip(F0.rows, F0.pivots):
        f = r[pc]
        if nz(f):
            r = [a - f * b if nz(b) else a for a, b in zip(r, row)]
    return r


def graded_f0_vectors(pi: GradedLieAlgebra, torus: TorusData, domain) -> list:
    """Basis vectors of Hodge level >= 0."""
    out = []
    for i, m in enumerate(pi.multiweights):
        if torus.hodge_of(m) >= 0:
            v = _zero(pi.dim, domain)
            v[i] = domain.one
            out.append(v)
    return out


def hodge_f0(action: UAction, torus: TorusData, h, domain) -> F0Data:
    """F^0 Lie pi on the de Rham side: exp(D_h) applied to the graded F^0."""
    vecs = [action.act(h, v) for v in graded_f0_vectors(action.pi, torus, domain)]
    return f0_data(action.pi, vecs, domain)


def f0_reduce(x, F0: F0Data, side: str = "left"):
    """Canonical representative of F^0 x (left) or x F^0 (right): zero in every pivot coordinate."""
    if side not in ("left", "right"):
        raise ValidationError("side must be 'left' or 'right'")
    pi = F0.pi
    if not F0.rows:
        return list(x)
    x = list(x)
    for n in sorted(set(pi.weights), reverse=True):
        eta = [0] * pi.dim
        hit = False
        for row, pc in zip(F0.rows, F0.pivots):
            if pi.weights[pc] != n or not nz(x[pc]):
                continue
            hit = True
            c = x[pc]
            eta = [a - c * b if nz(b) else a for a, b in zip(eta, row)]
        if hit:
            x = bch(pi, eta, x) if side == "left" else bch(pi, x, eta)
    return x


# beta maps and diagrams ---------------------------------------------------------------


@dataclass
class CKData:
    """Everything the beta maps need: the action, torus, period loop and Frobenius element."""

    action: UAction
    torus: TorusData
    loop: PeriodLoop
    frobenius: list
    domain: object
    _f0: F0Data | None = field(default=None, repr=False)

    def f0(self) -> F0Data:
        if self._f0 is None:
            self._f0 = hodge_f0(self.action, self.torus, self.loop.hodge, self.domain)
        return self._f0


def _paths(T: Torsor, ck: CKData, f0_lift=None):
    pi = T.pi
    g_gr = gr_fixed_point(T)
    g_H = T.act_U(ck.loop.hodge, g_gr)
    if f0_lift is not None:
        g_H = _mul(pi, g_H, f0_lift)
    g_cr = frobenius_fixed_point(T, ck.frobenius, ck.torus)
    check = T.act_U(ck.loop.crystalline, g_gr)
    if not _equal(check, g_cr):
        raise DiagramViolationError("Frobenius-fixed point differs from tau_cr applied to the graded point",
                                    {"fixed": _dump(g_cr, T.domain), "transported": _dump(check, T.domain)})
    return g_gr, g_H, g_cr


def beta_L(T: Torsor, ck: CKData, f0_lift=None):
    """(gamma_H)^-1 gamma_cr as a point of F^0 \\ pi."""
    pi = T.pi
    _, g_H, g_cr = _paths(T, ck, f0_lift)
    return f0_reduce(_mul(pi, _inv(g_H), g_cr), ck.f0(), "left")


def beta_R(T: Torsor, ck: CKData, f0_lift=None):
    """(gamma_cr)^-1 gamma_H as a point of pi / F^0."""
    pi = T.pi
    _, g_H, g_cr = _paths(T, ck, f0_lift)
    return f0_reduce(_mul(pi, _inv(g_cr), g_H), ck.f0(), "right")


def left_path_L(c: Cocycle, ck: CKData):
    """Transport by tau_H, evaluate at uL, reduce into F^0 \\ pi."""
    return f0_reduce(transport_evaluate(c, ck.loop.hodge, ck.loop.uL), ck.f0(), "left")


def left_path_R(c: Cocycle, ck: CKData):
    """Transport by tau_cr, evaluate at uR, reduce into pi / F^0."""
    return f0_reduce(transport_evaluate(c, ck.loop.crystalline, ck.loop.uR), ck.f0(), "right")


def random_f0_element(rng, F0: F0Data, domain):
    out = _zero(F0.pi.dim, domain)
    for row in F0.rows:
        c = domain(int(rng.integers(-2, 3)))
        if nz(c):
            out = [a + c * b for a, b in zip(out, row)]
    return out


def _dump(v, domain):
    return [domain.to_json(domain(x)) for x in v]


@dataclass
class DiagramReport:
    side: str
    seed: int
    trials: int
    records: list

    @property
    def agreed(self) -> int:
        return sum(1 for r in self.records if r["agree"])

    @property
    def ok(self) -> bool:
        return self.agreed == self.trials

    def to_json(self) -> dict:
        return {"suite": self.side, "seed": self.seed, "trials": self.trials, "agreed": self.agreed,
                "ok": self.ok, "records": self.records}


def verify_diagram(ck: CKData, side: str, seed: int, trials: int, strict: bool = False) -> DiagramReport:
    """Compare the cocycle path with the direct beta map on seeded random torsors."""
    d = ck.domain
    records = []
    for k, rng in enumerate(trial_rngs(seed, trials)):
        T = random_torsor(rng, ck.action, d)
        f = random_f0_element(rng, ck.f0(), d)
        c = delta(T)
        if side == "left":
            left, right = left_path_L(c, ck), beta_L(T, ck, f)
        else:
            left, right = left_path_R(c, ck), beta_R(T, ck, f)
        agree = _equal(left, right)
        rec = {"trial": k, "seed": seed, "torsor": T.fingerprint(), "left": _dump(left, d),
               "right": _dump(right, d), "agree": agree,
               "precision": _prec_json(min_relative_precision(list(left) + list(right), d))}
        if not agree and strict:
            raise DiagramViolationError(f"{side} diagram fails on trial {k}",
                                        {"record": rec, "torsor": T.to_json()})
        records.append(rec)
    return DiagramReport(side, seed, trials, records)


def verify_left_diagram(ck: CKData, seed: int, trials: int, strict: bool = False) -> DiagramReport:
    return verify_diagram(ck, "left", seed, trials, strict)


def verify_right_diagram(ck: CKData, seed: int, trials: int, strict: bool = False) -> DiagramReport:
    return verify_diagram(ck, "right", seed, trials, strict)


# localization-realization ----------------------------------------------------------------


@dataclass
class LocRealMap:
    chart: SelmerChart
    coordinates: list
    names: list
    polynomials: list

    def to_json(self) -> dict:
        return {"source": list(self.chart.variables()), "source_coordinates": self.chart.names,
                "target": self.names, "map": [str(p) for p in self.polynomials]}


def locreal_map(ck: CKData) -> LocRealMap:
    """The polynomial map Z^1 -> F^0 \\ pi, c -> [tau_H-transport of c evaluated at uL]."""
    chart = selmer_chart(ck.action)
    vars_ = chart.variables()
    c = universal_cocycle(ck.action, chart, ck.domain)
    value = left_path_L(c, ck)
    F0 = ck.f0()
    comp = F0.complement()
    polys = []
    for i in comp:
        v = value[i]
        polys.append(v if isinstance(v, Polynomial) else Polynomial.constant(vars_, v))
    return LocRealMap(chart, comp, [ck.action.pi.names[i] for i in comp], polys)
