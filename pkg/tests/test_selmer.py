from fractions import Fraction

import pytest

from ckperiods.errors import FNotSubalgebraError
from ckperiods.poly import eliminate
from ckperiods.randomgen import trial_rngs
from ckperiods.scalars.domain import QQ
from ckperiods.scenario import load_scenario
from ckperiods.selmer import (
    Torsor,
    beta_L,
    cocycle_from_chart,
    delta,
    f0_data,
    f0_reduce,
    gr_fixed_point,
    left_path_L,
    locreal_map,
    random_cocycle,
    random_torsor,
    selmer_chart,
    trivial_torsor,
    verify_left_diagram,
    verify_right_diagram,
)
from ckperiods.uni import GradedLieAlgebra, UAction, bch

F = Fraction


def toy_action():
    pi = GradedLieAlgebra.free([("a", -1, (1, 0)), ("b", -1, (0, 1))], 2)
    U = GradedLieAlgebra.free([("s", -1, (1, 0))], 2)
    ab = [F(0)] * pi.dim
    ab[pi.index["[a,b]"]] = F(1)
    return UAction.from_generators(U, pi, {0: {1: ab}})


def test_chart_dimensions():
    assert selmer_chart(toy_action()).names == ["s:a"]
    U = GradedLieAlgebra.free([("s", -1, (1, 0))], 2)
    pi = GradedLieAlgebra.free([("a", -1, (0, 1))], 2)
    assert selmer_chart(UAction.trivial(U, pi)).dim == 0
    chart = selmer_chart(load_scenario("nonabelian", "rational").action)
    assert chart.names == ["x:a", "y:[[a,b],b]"] and chart.dim_by_level == {-6: 1, -2: 1}


def test_trivial_torsor():
    act = toy_action()
    T = trivial_torsor(act, QQ)
    assert delta(T).values == {} and not any(gr_fixed_point(T))


def test_cocycle_identity():
    for name in ("toy", "nonabelian"):
        act = toy_action() if name == "toy" else load_scenario(name, "rational").action
        for rng in trial_rngs(41, 10):
            c = random_cocycle(rng, act, QQ)
            assert c.check_equivariant()
            u = [F(int(x)) for x in rng.integers(-2, 3, size=act.U.dim)]
            v = [F(int(x)) for x in rng.integers(-2, 3, size=act.U.dim)]
            lhs = c.evaluate(bch(act.U, u, v))
            rhs = bch(act.pi, c.evaluate(u), act.act(u, c.evaluate(v)))
            assert lhs == rhs


def test_delta_recovers_twist():
    act = load_scenario("nonabelian", "rational").action
    seen = set()
    for rng in trial_rngs(42, 50):
        c = random_cocycle(rng, act, QQ)
        g0 = [F(int(x)) for x in rng.integers(-2, 3, size=act.pi.dim)]
        d = delta(Torsor(c, g0))
        assert d.equals(c)
        seen.add(tuple(tuple(d.value(k)) for k in range(len(act.U.generators))))
    assert len(seen) > 1


def test_abelian_evaluation_is_linear():
    act = load_scenario("abelian", "rational").action
    chart = selmer_chart(act)
    c1 = cocycle_from_chart(act, chart, [F(2)], QQ)
    c2 = cocycle_from_chart(act, chart, [F(-5)], QQ)
    c3 = cocycle_from_chart(act, chart, [F(-3)], QQ)
    u = [F(3)] * act.U.dim
    assert [a + b for a, b in zip(c1.evaluate(u), c2.evaluate(u))] == c3.evaluate(u)


def test_f0_reduce_examples():
    pi = toy_action().pi
    F0 = f0_data(pi, [[F(1), F(0), F(0)]], QQ)
    x = [F(1), F(2), F(3)]
    # exp(-a) exp(x) and exp(x) exp(-a), worked out by hand with BCH to order 2
    assert f0_reduce(x, F0, "left") == [0, 2, 2]
    assert f0_reduce(x, F0, "right") == [0, 2, 4]
    assert f0_reduce(x, f0_data(pi, [], QQ)) == x
    with pytest.raises(FNotSubalgebraError):
        f0_data(pi, [[F(1), F(0), F(0)], [F(0), F(1), F(0)]], QQ)


def test_left_path_matches_beta():
    for name in ("abelian", "nonabelian"):
        ck = load_scenario(name, "rational").ck()
        for rng in trial_rngs(43, 10):
            T = random_torsor(rng, ck.action, QQ)
            assert left_path_L(delta(T), ck) == beta_L(T, ck)


def test_diagram_reports():
    ck = load_scenario("nonabelian", "rational").ck()
    for report in (verify_left_diagram(ck, 7, 10), verify_right_diagram(ck, 7, 10)):
        assert report.ok and report.agreed == 10
        assert report.to_json()["records"][0]["seed"] == 7


def test_locreal_evaluates_to_left_path():
    ck = load_scenario("nonabelian", "rational").ck()
    m = locreal_map(ck)
    for rng in trial_rngs(44, 10):
        point = [F(int(x)) for x in rng.integers(-3, 4, size=m.chart.dim)]
        value = left_path_L(cocycle_from_chart(ck.action, m.chart, point, QQ), ck)
        assert [p.evaluate(point) for p in m.polynomials] == [value[i] for i in m.coordinates]


def test_locreal_image_ideal():
    m = locreal_map(load_scenario("nonabelian", "rational").ck())
    ys = tuple(f"y{i + 1}" for i in range(len(m.polynomials)))
    assert [str(g) for g in eliminate(m.polynomials, ys)] == ["y1", "y2", "y3", "y5", "y7"]
