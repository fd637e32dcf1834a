from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ckperiods.errors import NotInImageError, RelationsViolatedError
from ckperiods.scalars.linalg import exp_nilpotent, log_unipotent, matmul
from ckperiods.uni import (
    GradedLieAlgebra,
    GroupElement,
    act_torus,
    bch,
    necklace_dimension,
    standard_representation,
)
from ckperiods.uni.lie import is_lyndon, lyndon_words

F = Fraction


def free2(depth=4):
    return GradedLieAlgebra.free([("a", -1), ("b", -1)], depth)


def heisenberg_rep():
    """Free on a, b at depth 2 acting on Q^3 by strictly upper triangular matrices."""
    alg = free2(2)
    E12 = [[0, 1, 0], [0, 0, 0], [0, 0, 0]]
    E23 = [[0, 0, 0], [0, 0, 1], [0, 0, 0]]
    return alg, standard_representation(alg, {0: E12, 1: E23}, 3)


def test_lyndon_words_and_necklace_counts():
    words = list(lyndon_words(2, 4))
    assert all(is_lyndon(w) for w in words) and words == sorted(words)
    counts = [sum(1 for w in words if len(w) == n) for n in range(1, 5)]
    assert counts == [necklace_dimension(n, 2) for n in range(1, 5)] == [2, 1, 2, 3]


def test_free_algebra_dimensions():
    assert free2(3).weight_dims() == {-1: 2, -2: 1, -3: 2}
    mixed = GradedLieAlgebra.free([("a", -3), ("b", -5)], 8)
    assert mixed.weight_dims() == {-3: 1, -5: 1, -8: 1}
    assert free2(4).check_jacobi() and free2(4).check_grading()


def test_quotient_by_bracket_is_abelian():
    L = free2(2)
    rel = [F(int(n == "[a,b]")) for n in L.names]
    Q = L.quotient([rel])
    assert Q.dim == 2 and Q.is_abelian()


coords = st.lists(st.integers(-3, 3).map(F), min_size=8, max_size=8)


@given(coords, coords, coords)
def test_bch_group_axioms(x, y, z):
    L = free2(4)
    assert L.dim == 8
    X, Y, Z = (GroupElement(L, v) for v in (x, y, z))
    one = GroupElement.identity(L)
    assert X * one == X and one * X == X
    assert (X * X.inverse()).is_identity()
    assert (X * Y) * Z == X * (Y * Z)
    assert X ** 2 == X * X


@given(coords, coords, st.integers(-3, 3).filter(bool))
def test_torus_acts_by_automorphisms(x, y, t):
    L = free2(4)
    lhs = act_torus(L, F(t), bch(L, x, y))
    rhs = bch(L, act_torus(L, F(t), x), act_torus(L, F(t), y))
    assert lhs == rhs


def test_torus_scales_by_weight():
    L = GradedLieAlgebra.free([("a", -2)], 2)
    assert act_torus(L, F(3), [F(1)]) == [F(1, 9)]


def test_abelian_bch_is_addition():
    A = GradedLieAlgebra.abelian(["x", "y"], [-1, -2], 2)
    assert bch(A, [F(1), F(2)], [F(3), F(-1)]) == [F(4), F(1)]


@given(st.lists(st.integers(-4, 4).map(F), min_size=3, max_size=3),
       st.lists(st.integers(-4, 4).map(F), min_size=3, max_size=3))
def test_bch_matches_matrix_product(x, y):
    alg, rho = heisenberg_rep()
    prod = matmul(rho.exp(x), rho.exp(y))
    assert rho.matrix_of(bch(alg, x, y)) == log_unipotent(prod)
    assert rho.pullback(prod) == bch(alg, x, y)


def test_representation_structure():
    alg, rho = heisenberg_rep()
    assert rho.is_faithful()
    assert rho.matrix_of([F(0), F(0), F(1)]) == [[0, 0, 1], [0, 0, 0], [0, 0, 0]]
    lower = exp_nilpotent([[0, 0, 0], [1, 0, 0], [0, 0, 0]])
    with pytest.raises(NotInImageError):
        rho.pullback(lower)


def test_relations_violated():
    L = free2(2)
    Q = L.quotient([[F(int(n == "[a,b]")) for n in L.names]])
    E12 = [[0, 1, 0], [0, 0, 0], [0, 0, 0]]
    E23 = [[0, 0, 0], [0, 0, 1], [0, 0, 0]]
    with pytest.raises(RelationsViolatedError):
        standard_representation(Q, {0: E12, 1: E23}, 3)
    truncated = free2(1)
    with pytest.raises(RelationsViolatedError):
        standard_representation(truncated, {0: E12, 1: E23}, 3)
