"""Timed acceptance criteria; each test records one PASS/FAIL line for the terminal summary."""

import itertools
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest
import sympy

from ckperiods.filtlin import (
    BifilteredSpace,
    Filtration,
    FilteredMap,
    Subspace,
    check_exactness_equivalences,
    gr_W,
    short_exact_sequence,
)
from ckperiods.hodgesplit import hodge_weight_splitting
from ckperiods.period import (
    _unit_section,
    a_M_coordinate,
    agreement_precision,
    apply_functional,
    assemble_period_loop,
    bk_log,
    f0_coordinates_of_U,
    functionals_killing_F0M,
    period_homomorphism,
    second_hodge_splitting,
    verify_periods_bk,
)
from ckperiods.phimod import PhiModule, frobenius_splitting, tensor_splitting_consistency
from ckperiods.poly import Polynomial, eliminate, ideal_contains, reduce, reduced_basis
from ckperiods.randomgen import (
    random_bifiltered,
    random_dims_by_weight,
    random_extension_scenario,
    random_phimodule,
    trial_rngs,
)
from ckperiods.scalars.domain import QQ, PadicField
from ckperiods.scalars.linalg import matmul, matvec, nullspace, transpose
from ckperiods.scalars.padic import INF
from ckperiods.scenario import BUNDLED, load_scenario
from ckperiods.selmer import (
    Torsor,
    delta,
    generic_torus_point,
    gr_fixed_point,
    locreal_map,
    random_cocycle,
    random_torsor,
    verify_diagram,
)
from ckperiods.uni.bch import bch
from ckperiods.uni.group import UAction
from ckperiods.uni.lie import GradedLieAlgebra

from .conftest import ACCEPTANCE_LINES


@contextmanager
def criterion(label: str, limit: float | None):
    t0 = time.perf_counter()
    status = "FAIL"
    detail = {}
    try:
        yield detail
        elapsed = time.perf_counter() - t0
        if limit is not None:
            assert elapsed < limit, f"{label} took {elapsed:.2f}s (limit {limit}s)"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - t0
        bound = f" < {limit:g}s" if limit is not None else ""
        extra = " ".join(f"{k}={v}" for k, v in detail.items())
        ACCEPTANCE_LINES.append(f"{status} {label} ({elapsed:.2f}s{bound}) {extra}".rstrip())


def _as_padic(M: PhiModule, D) -> PhiModule:
    """The same rational module read into Q_p."""
    W = M.space.W
    steps = {n: Subspace.span([[D(x) for x in v] for v in W.at(n).basis], M.dim, D) for n in M.weights}
    space = BifilteredSpace(M.dim, Filtration(steps, M.dim, False, D), None, None, D)
    return PhiModule(space, [[D(x) for x in r] for r in M.phi])


def _agreement(a, b, D):
    """Digits of agreement of b with the exact rational a, relative to the size of a."""
    diff = b - D(a)
    top = D.valuation(diff) if D.valuation(diff) != INF else diff.absprec
    return top - D.valuation(D(a))


# 1 -----------------------------------------------------------------------------


def test_c01_frobenius_splitting_matches_generalized_eigenspaces():
    with criterion("C1 frobenius splitting = generalized eigenspaces", 10) as info:
        checked = 0
        for rng in trial_rngs(101, 200):
            M, eig = random_phimodule(rng, random_dims_by_weight(rng, 5))
            s = frobenius_splitting(M)
            Phi = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in M.phi])
            x = sympy.Symbol("x")
            for n, lams in eig.items():
                P = sympy.Poly(sympy.prod([x - sympy.Rational(l.numerator, l.denominator) for l in lams]), x)
                PM = sympy.zeros(M.dim, M.dim)
                for (k,), c in P.terms():
                    PM += c * Phi**k
                kernel = [[Fraction(int(sympy.fraction(e)[0]), int(sympy.fraction(e)[1])) for e in v]
                          for v in PM.nullspace()]
                assert Subspace.span(kernel, M.dim, QQ) == s.component(n)
            checked += 1
        info["modules"] = checked


# 2 -----------------------------------------------------------------------------


def test_c02_frobenius_equivariance_exact_and_padic():
    with criterion("C2 phi.s = s.gr(phi) (exact; p-adic at N - loss)", None) as info:
        N = 20
        worst = None
        for k, rng in enumerate(trial_rngs(102, 200)):
            p = (3, 5, 7)[k % 3]
            M, _ = random_phimodule(rng, random_dims_by_weight(rng, 5), p)
            sq = frobenius_splitting(M)
            assert sq.is_equivariant() and sq.loss == 0
            D = PadicField(p, N)
            sp = frobenius_splitting(_as_padic(M, D))
            assert sp.is_equivariant()
            for n in sq.weights:
                for u, v in zip(sq.lifts[n], sp.lifts[n]):
                    for a, b in zip(u, v):
                        if a:
                            margin = _agreement(a, b, D) - (N - sp.loss)
                            assert margin >= 0
                            worst = margin if worst is None else min(worst, margin)
        info["modules"] = 200
        info["worst_margin"] = worst


# 3 -----------------------------------------------------------------------------


def test_c03_hodge_splitting_unipotent_and_compatible():
    with criterion("C3 Hodge splitting unipotent and F-compatible", 10) as info:
        for rng in trial_rngs(103, 200):
            dim = int(rng.integers(1, 9))
            V = random_bifiltered(rng, dim)
            s = hodge_weight_splitting(V)
            G = gr_W(V)
            comps = s.components()
            assert sum(S.dim for S in comps.values()) == dim
            for n in s.weights:
                below = V.W.at(n - 1)
                for sec, lift in zip(s.sections[n], s.lifts[n]):
                    assert below.contains([a - b for a, b in zip(lift, sec)])
                    assert V.W.at(n).contains(lift)
                assert comps[n].dim == G.section_spaces[n].dim
            for i in V.F.scan_range():
                Fi = V.F.at(i)
                pieces = [Fi.intersect(S) for S in comps.values()]
                assert Subspace.span([b for P in pieces for b in P.basis], dim, QQ) == Fi
        info["spaces"] = 200


# 4 -----------------------------------------------------------------------------


def test_c04_tensor_functoriality():
    with criterion("C4 splitting of a tensor product = tensor of splittings", 30) as info:
        for rng in trial_rngs(104, 100):
            M, _ = random_phimodule(rng, random_dims_by_weight(rng, 3))
            N, _ = random_phimodule(rng, random_dims_by_weight(rng, 3))
            assert tensor_splitting_consistency(M, N)
        info["pairs"] = 100


# 5 -----------------------------------------------------------------------------


def _exp3(N):
    one = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    N2 = matmul(N, N)
    return [[one[i][j] + N[i][j] + Fraction(N2[i][j]) / 2 for j in range(3)] for i in range(3)]


def _necklaces(k: int, n: int) -> int:
    """Aperiodic necklaces of length n over k letters, by brute-force enumeration."""
    seen = set()
    count = 0
    for w in itertools.product(range(k), repeat=n):
        if w in seen:
            continue
        rots = {w[i:] + w[:i] for i in range(n)}
        seen |= rots
        if len(rots) == n:
            count += 1
    return count


def test_c05_bch_heisenberg_and_necklaces():
    with criterion("C5 BCH associativity, Heisenberg, necklace dimensions", 20) as info:
        trials = 0
        for rng in trial_rngs(105, 500):
            k = int(rng.integers(2, 4))
            depth = int(rng.integers(2, 7)) if k == 2 else int(rng.integers(2, 5))
            gens = [(f"g{i}", -1) for i in range(k)]
            A = GradedLieAlgebra.free(gens, depth)
            x, y, z = ([Fraction(int(v)) for v in rng.integers(-2, 3, size=A.dim)] for _ in range(3))
            assert bch(A, bch(A, x, y), z) == bch(A, x, bch(A, y, z))
            trials += 1
        H = GradedLieAlgebra.free([("x", -1), ("y", -1)], 2)
        assert H.names == ["x", "y", "[x,y]"]
        X, Y, Z = ([[Fraction(int((i, j) == e)) for j in range(3)] for i in range(3)]
                   for e in ((0, 1), (1, 2), (0, 2)))
        assert matmul(X, Y) != matmul(Y, X)
        for rng in trial_rngs(1105, 50):
            a, b = ([Fraction(int(v), int(rng.integers(1, 4))) for v in rng.integers(-3, 4, size=3)]
                    for _ in range(2))
            c = bch(H, a, b)

            def mat(v):
                return [[v[0] * X[i][j] + v[1] * Y[i][j] + v[2] * Z[i][j] for j in range(3)] for i in range(3)]

            assert _exp3(mat(c)) == matmul(_exp3(mat(a)), _exp3(mat(b)))
            xy = a[0] * b[1] - a[1] * b[0]
            assert c == [a[0] + b[0], a[1] + b[1], a[2] + b[2] + xy / 2]
        for D in range(1, 7):
            A = GradedLieAlgebra.free([("a", -1), ("b", -1)], D)
            dims = A.weight_dims()
            for n in range(1, D + 1):
                assert dims[-n] == _necklaces(2, n)
        info["triples"] = trials


# 6 -----------------------------------------------------------------------------


@pytest.fixture(scope="module")
def padic_scenarios():
    return {name: load_scenario(name, "padic") for name in ("abelian", "nonabelian")}


def test_c06_left_right_diagrams(padic_scenarios):
    with criterion("C6 left/right diagrams at p-adic precision 20", 60) as info:
        for name, sc in padic_scenarios.items():
            assert sc.domain.N == 20
            for side in ("left", "right"):
                rep = verify_diagram(sc.ck(), side, seed=6, trials=100)
                assert rep.agreed == 100 and rep.ok
                info[f"{name}_{side}"] = f"{rep.agreed}/100"


# 7 -----------------------------------------------------------------------------


def test_c07_period_equals_bloch_kato_log():
    with criterion("C7 per^L(a_M(f)) = f(log_BK)", 30) as info:
        N = 20
        extensions = checked = 0
        worst = N
        for k, rng in enumerate(trial_rngs(107, 110)):
            s = random_extension_scenario(rng, (3, 5, 7)[k % 3], PadicField((3, 5, 7)[k % 3], N))
            assert s.dim - 1 <= 3
            rep = verify_periods_bk(s, strict=False)
            assert rep.ok and rep.records
            extensions += 1
            for r in rep.records:
                agree = r["agree_mod"] if r["agree_mod"] is not None else N
                assert agree >= N - 2
                worst = min(worst, agree)
                checked += 1
        info["extensions"] = extensions
        info["functionals"] = checked
        info["min_agreement"] = f"p^{worst}"


# 8 -----------------------------------------------------------------------------


def test_c08_loops_inverse_and_hodge_independence():
    with criterion("C8 uL.uR = id; per^L independent of the Hodge splitting", 10) as info:
        scenarios = 0
        for name in BUNDLED:
            for mode in ("rational", "padic"):
                sc = load_scenario(name, mode)
                loop = sc.loop()
                assert (loop.element(loop.uL) * loop.element(loop.uR)).is_identity()
                scenarios += 1
        translated = 0
        for k, rng in enumerate(trial_rngs(108, 60)):
            D = QQ if k % 2 else PadicField(5, 20)
            s = random_extension_scenario(rng, 5, D)
            loop = assemble_period_loop(s)
            assert (loop.element(loop.uL) * loop.element(loop.uR)).is_identity()
            scenarios += 1
            f0 = f0_coordinates_of_U(s)
            if not f0:
                continue
            coords = [D(int(rng.integers(-3, 4))) if b in f0 else D.zero for b in range(s.U.dim)]
            H2 = second_hodge_splitting(s, loop, coords)
            loop2 = assemble_period_loop(s, H2)
            assert (loop2.element(loop2.uL) * loop2.element(loop2.uR)).is_identity()
            _, e0 = _unit_section(s.module)
            for H, lp in ((loop.hodge_splitting, loop), (H2, loop2)):
                one_H = matvec(H.automorphism(), e0)
                log = bk_log(s.module, one_H)
                vals = [(period_homomorphism(lp, a_M_coordinate(s, f, one_H)), apply_functional(f, log.value))
                        for f in functionals_killing_F0M(s.module)]
                if H is loop.hodge_splitting:
                    first = vals
            for (l1, r1), (l2, r2) in zip(first, vals):
                assert agreement_precision(l1, l2, D) >= (18 if D is not QQ else INF)
                assert agreement_precision(r1, r2, D) >= (18 if D is not QQ else INF)
            translated += 1
        info["scenarios"] = scenarios
        info["hodge_translates"] = translated
        assert translated >= 10


# 9 -----------------------------------------------------------------------------


def _toy_action():
    """pi free on a, b at depth 2 with s acting by b -> [a, b]."""
    pi = GradedLieAlgebra.free([("a", -1, (1, 0)), ("b", -1, (0, 1))], 2)
    U = GradedLieAlgebra.free([("s", -1, (1, 0))], 2)
    ab = [Fraction(0)] * pi.dim
    ab[pi.index["[a,b]"]] = Fraction(1)
    return UAction.from_generators(U, pi, {0: {1: ab}})


def test_c09_delta_round_trip_and_fixed_point_uniqueness(padic_scenarios):
    with criterion("C9 delta round trip; fixed point uniqueness", 10) as info:
        actions = [("toy", _toy_action(), QQ)]
        actions += [(name, sc.action, sc.domain) for name, sc in padic_scenarios.items()]
        rounds = 0
        for k, rng in enumerate(trial_rngs(109, 120)):
            _, act, D = actions[k % len(actions)]
            c = random_cocycle(rng, act, D)
            g0 = [D(int(rng.integers(-2, 3))) for _ in range(act.pi.dim)]
            assert delta(Torsor(c, g0)).equals(c)
            rounds += 1
        act = _toy_action()
        t = generic_torus_point(act.pi, QQ)
        perturbations = 0
        for rng in trial_rngs(1109, 15):
            T = random_torsor(rng, act, QQ)
            gamma = gr_fixed_point(T)
            assert T.act_torus(t, gamma) == gamma
            for shift in itertools.product((-1, 0, 1), repeat=act.pi.dim):
                if not any(shift):
                    continue
                y = bch(act.pi, gamma, [Fraction(v) for v in shift])
                assert T.act_torus(t, y) != y
                perturbations += 1
        info["round_trips"] = rounds
        info["perturbations"] = perturbations


# 10 ----------------------------------------------------------------------------


def test_c10_elimination_and_locreal_image():
    with criterion("C10 implicitization and LocReal image ideal", 10) as info:
        t = Polynomial.generators(("t",))[0]
        ideal = eliminate([t**2, t**3], ("x", "y"))
        target = Polynomial.parse("x**3 - y**2", ("x", "y"))
        assert ideal_contains(ideal, target)
        assert all(not reduce(g, [target]) for g in ideal)
        assert [str(g) for g in ideal] == ["x**3 - y**2"]

        sc = load_scenario("abelian", "rational")
        m = locreal_map(sc.ck())
        zs = m.chart.variables()
        ys = tuple(f"y{i + 1}" for i in range(len(m.polynomials)))
        assert all(p.total_degree() <= 1 and not p.constant_term() for p in m.polynomials)
        A = [[p.restrict(zs).terms.get(tuple(int(j == i) for j in range(len(zs))), Fraction(0))
              for i in range(len(zs))] for p in m.polynomials]
        kernel = nullspace(transpose(A), len(ys), QQ) if zs else []
        linear = [Polynomial(ys, {tuple(int(j == i) for j in range(len(ys))): c for i, c in enumerate(v) if c})
                  for v in kernel]
        image = eliminate(m.polynomials, ys)
        assert reduced_basis(linear) == reduced_basis(image)
        # nonlinear map: only the unconstrained coordinates y4 and y6 survive
        m = locreal_map(load_scenario("nonabelian", "rational").ck())
        ys = tuple(f"y{i + 1}" for i in range(len(m.polynomials)))
        image = eliminate(m.polynomials, ys)
        assert [str(g) for g in image] == ["y1", "y2", "y3", "y5", "y7"]
        point = [p.evaluate([Fraction(2), Fraction(-1)]) for p in m.polynomials]
        assert all(not g.evaluate(point) for g in image)
        info["image_generators"] = len(image)


# 11 ----------------------------------------------------------------------------


def test_c11_exactness_equivalences():
    with criterion("C11 exactness conditions agree", 5) as info:
        for rng in trial_rngs(111, 100):
            dim = int(rng.integers(1, 7))
            M = random_bifiltered(rng, dim)
            k = int(rng.integers(0, dim + 1))
            sub = [[Fraction(int(v)) for v in rng.integers(-2, 3, size=dim)] for _ in range(k)]
            f, g = short_exact_sequence(M, sub)
            rep = check_exactness_equivalences(f, g)
            assert (rep.exact_strict, rep.levelwise, rep.graded) == (True, True, True)
        L = BifilteredSpace.coordinate([1])
        Mw = BifilteredSpace.coordinate([0])
        Z = BifilteredSpace.coordinate([])
        f = FilteredMap([[Fraction(1)]], L, Mw)
        g = FilteredMap([], Mw, Z)
        rep = check_exactness_equivalences(f, g)
        assert (rep.exact_strict, rep.levelwise, rep.graded) == (False, False, False)
        info["instances"] = 100
