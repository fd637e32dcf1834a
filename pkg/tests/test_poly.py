from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ckperiods.errors import SizeLimitError, ValidationError
from ckperiods.poly import Polynomial, buchberger, eliminate, ideal_contains, reduce
from ckperiods.scalars.domain import PadicField

F = Fraction
XY = ("x", "y")
x, y = Polynomial.generators(XY)

monomial = st.tuples(st.integers(0, 3), st.integers(0, 3))
polys = st.dictionaries(monomial, st.integers(-4, 4).filter(bool).map(F), min_size=1, max_size=3).map(
    lambda t: Polynomial(XY, t))


def test_basic_bases():
    assert [str(g) for g in buchberger([x, y])] == ["x", "y"]
    assert [str(g) for g in buchberger([2 * x * y - 2, 3 * x * y - 3])] == ["x*y - 1"]
    assert buchberger([Polynomial(XY)]) == []


def test_twisted_cubic_elimination():
    X, Y, Z = Polynomial.generators(("x", "y", "z"))
    G = buchberger([X**2 - Y, X**3 - Z])
    target = Polynomial.parse("y**3 - z**2", ("x", "y", "z"))
    assert ideal_contains(G, target)
    assert [str(g) for g in G if not g.uses([0])] == ["y**3 - z**2"]
    t = Polynomial.generators(("t",))[0]
    assert [str(g) for g in eliminate([t**2, t**3], ("u", "v"))] == ["u**3 - v**2"]


def test_elimination_errors():
    t = Polynomial.generators(("t",))[0]
    with pytest.raises(ValidationError):
        eliminate([t], ("t",))
    with pytest.raises(ValidationError):
        eliminate([t, t], ("u",))
    with pytest.raises(ValidationError):
        buchberger([Polynomial.constant(XY, PadicField(5, 10)(3)) * x])
    with pytest.raises(SizeLimitError):
        buchberger([x**3 * y - y**2 + 1, x * y**3 - x**2 + 2, x**2 * y**2 - x - y], max_pairs=2)


SX, SY = sympy.symbols("x y")


def _to_sympy(g):
    return sympy.expand(sympy.sympify(str(g), locals={"x": SX, "y": SY}))


@settings(max_examples=40)
@given(st.lists(polys, min_size=1, max_size=3))
def test_buchberger_matches_sympy(gens):
    ours = buchberger(gens, max_basis=60, max_pairs=2000)
    theirs = sympy.groebner([_to_sympy(g) for g in gens], SX, SY, order="lex", domain="QQ").exprs
    assert {_to_sympy(g) for g in ours} == {sympy.expand(e) for e in theirs}
    for g in gens:
        assert ideal_contains(ours, g)


@given(polys)
def test_parse_round_trip(p):
    assert Polynomial.parse(str(p), XY) == p


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == Polynomial(XY) and a * b == b * a
    pt = [F(2), F(-1, 3)]
    assert (a * b + c).evaluate(pt) == a.evaluate(pt) * b.evaluate(pt) + c.evaluate(pt)


@given(polys, st.lists(polys, min_size=1, max_size=2))
def test_reduce_remainder_is_in_coset(f, G):
    r = reduce(f, G)
    lead = [g.leading()[0] for g in G]
    for e in r.terms:
        assert not any(all(a <= b for a, b in zip(m, e)) for m in lead)
    assert ideal_contains(buchberger(G, max_basis=60, max_pairs=2000), f - r)
