from fractions import Fraction

import pytest

from ckperiods.errors import InputsNotSplittingsError, ValidationError
from ckperiods.filtlin import BifilteredSpace, Subspace, gr_W
from ckperiods.hodgesplit import (
    check_dimension_identity,
    cocharacter_matrix,
    compare_splittings,
    hodge_weight_splitting,
    is_hodge_splitting,
    splitting_cocharacter_check,
    splitting_from_grading,
)
from ckperiods.randomgen import random_bifiltered, trial_rngs
from ckperiods.scalars.domain import QQ
from ckperiods.scalars.linalg import matmul

F = Fraction


def span(*vecs):
    return Subspace.span([[F(x) for x in v] for v in vecs], len(vecs[0]), QQ)


def test_two_step_example():
    V = BifilteredSpace.coordinate([-2, 0], F={0: [[1, 1]], 1: []})
    s = hodge_weight_splitting(V)
    assert s.component(0) == span([1, 1])
    assert s.component(-2) == span([1, 0])
    assert splitting_cocharacter_check(V, s.components())


def test_incompatible_grading_rejected():
    V = BifilteredSpace.coordinate([-2, 0], F={0: [[1, 1]], 1: []})
    naive = {-2: span([1, 0]), 0: span([0, 1])}
    assert not is_hodge_splitting(V, naive)
    assert not splitting_cocharacter_check(V, naive)
    with pytest.raises(InputsNotSplittingsError):
        compare_splittings(hodge_weight_splitting(V), splitting_from_grading(V, naive))


def _family(a):
    """Splittings of a space whose weight-0 part has a free direction e3 + a e1."""
    V = BifilteredSpace.coordinate([-2, 0, 0], F={0: [[1, 1, 0]], 1: []})
    return V, splitting_from_grading(V, {-2: span([1, 0, 0]), 0: span([1, 1, 0], [a, 0, 1])})


def test_compare_splittings_group_law():
    V, s0 = _family(0)
    s1, s2 = _family(2)[1], _family(-3)[1]
    for s in (s0, s1, s2):
        s.space = V
        assert is_hodge_splitting(V, s.components())
    ident = [[F(int(i == j)) for j in range(3)] for i in range(3)]
    assert compare_splittings(s1, s1) == ident
    u01, u12, u02 = compare_splittings(s0, s1), compare_splittings(s1, s2), compare_splittings(s0, s2)
    assert matmul(u12, u01) == u02
    assert u01 == [[1, 0, 2], [0, 1, 0], [0, 0, 1]]


def test_random_spaces_split():
    for rng in trial_rngs(31, 30):
        V = random_bifiltered(rng, int(rng.integers(1, 6)))
        s = hodge_weight_splitting(V)
        comps = s.components()
        assert is_hodge_splitting(V, comps)
        assert splitting_cocharacter_check(V, comps)
        assert {n: S.dim for n, S in comps.items() if S.dim} == gr_W(V).dims()
        assert check_dimension_identity(V)


def test_cocharacter_is_multiplicative():
    V = BifilteredSpace.coordinate([-2, 0], F={0: [[1, 1]], 1: []})
    comps = hodge_weight_splitting(V).components()
    assert matmul(cocharacter_matrix(comps, 2, QQ), cocharacter_matrix(comps, 3, QQ)) == \
        cocharacter_matrix(comps, 6, QQ)


def test_dimension_identity_requires_f():
    with pytest.raises(ValidationError):
        check_dimension_identity(BifilteredSpace.coordinate([0]))
