from fractions import Fraction

import pytest

from ckperiods.errors import NoF0LiftError, ValidationError
from ckperiods.filtlin import Filtration, Subspace
from ckperiods.period import (
    a_M_coordinate,
    agreement_precision,
    assemble_period_loop,
    bk_log,
    check_extension,
    functionals_killing_F0M,
    period_homomorphism,
    unit_hodge_lift,
    verify_periods_bk,
)
from ckperiods.phimod import PhiModule, module_from_matrix
from ckperiods.poly import Polynomial
from ckperiods.randomgen import random_extension_scenario, trial_rngs
from ckperiods.scalars.domain import QQ, PadicField
from ckperiods.scalars.padic import INF
from ckperiods.scenario import load_scenario

F = Fraction


def kummer(a, F0=((0, 1),), domain=QQ):
    """Extension of the unit by a weight -2 line with Frobenius 1/5 and extension class a."""
    M = module_from_matrix([[F(1, 5), F(a)], [F(0), F(1)]], [-2, 0], domain)
    full = Subspace.span([[F(1), F(0)], [F(0), F(1)]], 2, domain)
    top = Subspace.span([[F(x) for x in v] for v in F0], 2, domain)
    return PhiModule(M.space.with_F(Filtration({-1: full, 0: top, 1: Subspace.zero(2, domain)}, 2, domain)), M.phi)


def test_running_example_loop():
    sc = load_scenario("running", "rational")
    loop = sc.loop()
    assert loop.uL == [F(5, 4)] and loop.uR == [F(-5, 4)]
    assert loop.crystalline == [F(5, 4)] and loop.hodge == [0]
    f = Polynomial.generators(("u1",))[0]
    assert period_homomorphism(loop, f) == F(5, 4)
    assert period_homomorphism(loop, f, "R") == F(-5, 4)


def test_running_example_padic():
    sc = load_scenario("running", "padic")
    D = sc.domain
    loop = sc.loop()
    assert loop.uL[0] == D(F(5, 4)) and loop.precision() >= 18
    rep = verify_periods_bk(sc.period)
    assert rep.ok and all(r["agree_mod"] is None or r["agree_mod"] >= 18 for r in rep.records)


def test_running_example_bk_log():
    sc = load_scenario("running", "rational")
    log = bk_log(sc.period.module)
    assert log.value == [F(5, 4), 0] and log.one_cr == [F(5, 4), F(1)]
    assert str(a_M_coordinate(sc.period, [F(1), F(0)], [F(0), F(1)])) == "u1"
    assert verify_periods_bk(sc.period).records[0]["per_L"] == "5/4"


def test_split_scenario_has_trivial_loop():
    loop = load_scenario("split", "rational").loop()
    assert (loop.element(loop.uL)).is_identity() and loop.element(loop.uR).is_identity()


def test_kummer_log_is_linear_in_class():
    f = functionals_killing_F0M(kummer(1))
    assert len(f) == 1
    logs = {a: bk_log(kummer(a)).value[0] for a in (1, 2, -3)}
    assert logs == {1: F(5, 4), 2: F(5, 2), -3: F(-15, 4)}


def test_a_M_is_additive_on_loops():
    sc = load_scenario("running", "rational")
    poly = a_M_coordinate(sc.period, [F(1), F(0)], [F(0), F(1)])
    for x, y in ((F(1), F(2)), (F(-3, 2), F(5))):
        assert poly.evaluate([x + y]) == poly.evaluate([x]) + poly.evaluate([y])


def test_no_f0_lift():
    E = kummer(1, F0=((1, 0),))
    with pytest.raises(NoF0LiftError):
        unit_hodge_lift(E)
    assert check_extension(E) == []


def test_extension_shape_checked():
    M = module_from_matrix([[F(1, 5), F(0)], [F(0), F(1, 25)]], [-4, -2])
    assert check_extension(M)
    with pytest.raises(ValidationError):
        functionals_killing_F0M(M)


def test_random_extensions_satisfy_identity():
    for shape in ("pure", "chain"):
        for rng in trial_rngs(51, 5):
            s = random_extension_scenario(rng, shape=shape)
            assert verify_periods_bk(s, assemble_period_loop(s)).ok


def test_agreement_precision():
    D = PadicField(5, 10)
    assert agreement_precision(F(1), F(1), QQ) == INF
    assert agreement_precision(D(1), D(26), D) == 2
    assert agreement_precision(D(1), D(1), D) == 10
