from fractions import Fraction

import pytest

from ckperiods.errors import SpectraNotDisjointError
from ckperiods.filtlin import Subspace
from ckperiods.phimod import (
    PhiModule,
    frobenius_splitting,
    graded_module,
    module_from_matrix,
    newton_slopes,
    phi_fixed_lift,
    tensor_module,
    tensor_splitting_consistency,
    validate_phimodule,
)
from ckperiods.randomgen import random_dims_by_weight, random_invertible, random_phimodule, trial_rngs
from ckperiods.scalars.domain import QQ, PadicField
from ckperiods.scalars.linalg import det, inverse, matmul

F = Fraction


def running_module(domain=QQ):
    return module_from_matrix([[F(1, 5), F(1)], [F(0), F(1)]], [-2, 0], domain)


def test_running_example_lift():
    s = frobenius_splitting(running_module())
    assert s.lifts[0] == [[F(5, 4), F(1)]]
    assert s.is_equivariant()
    assert phi_fixed_lift(running_module()) == [F(5, 4), F(1)]


def test_running_example_padic():
    D = PadicField(5, 20)
    s = frobenius_splitting(running_module(D))
    assert s.lifts[0][0] == [D(F(5, 4)), D(1)]
    assert s.loss == 0 or s.loss <= 2


def test_graded_input_gives_inclusion():
    M = graded_module([-2, 0], [F(1, 25), F(1)], QQ)
    s = frobenius_splitting(M)
    assert s.component(-2) == Subspace.span([[F(1), F(0)]], 2, QQ)
    assert s.component(0) == Subspace.span([[F(0), F(1)]], 2, QQ)


def test_lift_agrees_with_splitting_of_unit():
    for rng in trial_rngs(21, 20):
        M, _ = random_phimodule(rng, {-2: 1, -4: 1}, aligned=True)
        phi = [row + [F(int(rng.integers(-3, 4)))] for row in M.phi] + [[F(0)] * M.dim + [F(1)]]
        E = module_from_matrix(phi, [-4, -2, 0])
        e = phi_fixed_lift(E)
        s = frobenius_splitting(E)
        assert Subspace.span([e], 3, QQ) == s.component(0)
        assert E.apply(e) == e


def test_validation_flags():
    assert validate_phimodule(running_module()).ok
    same = module_from_matrix([[F(1), F(1)], [F(0), F(1)]], [-2, 0])
    rep = validate_phimodule(same)
    assert "SPECTRA_NOT_DISJOINT" in rep.flags() and "BESSER_CONDITION_FAILED" in rep.flags()
    with pytest.raises(SpectraNotDisjointError):
        frobenius_splitting(same)
    unstable = module_from_matrix([[F(1, 5), F(0)], [F(1), F(1)]], [-2, 0])
    assert validate_phimodule(unstable).flags()[0] == "W_NOT_STABLE"


def test_newton_slopes():
    D = PadicField(5, 20)
    # (x - 1/5)(x - 1/25) = x^2 - 6/25 x + 1/125
    slopes = newton_slopes([D(F(1, 125)), D(F(-6, 25)), D(1)], D)
    assert slopes == [-2, -1]
    assert newton_slopes([F(1), F(1)], QQ) is None
    rep = validate_phimodule(module_from_matrix([[F(1, 5), F(1)], [F(0), F(1)]], [-2, 0], D))
    assert rep.slopes_match == {-2: True, 0: True}


def test_tensor_examples():
    M = running_module()
    twist = graded_module([-2], [F(1, 5)], QQ)
    assert tensor_splitting_consistency(M, twist)
    split = graded_module([-2, 0], [F(1, 5), F(1)], QQ)
    assert tensor_splitting_consistency(split, split)
    for rng in trial_rngs(23, 20):
        A, _ = random_phimodule(rng, random_dims_by_weight(rng, 4))
        B, _ = random_phimodule(rng, random_dims_by_weight(rng, 4))
        assert tensor_splitting_consistency(A, B)
        assert frobenius_splitting(tensor_module(A, B)).is_equivariant()


def test_splitting_is_unique_and_basis_independent():
    """Conjugating by a W-preserving change of basis transports the splitting."""
    for rng in trial_rngs(24, 15):
        M, _ = random_phimodule(rng, {-4: 1, -2: 1, 0: 1}, aligned=True)
        g = [[F(1), F(int(rng.integers(-2, 3))), F(int(rng.integers(-2, 3)))],
             [F(0), F(1), F(int(rng.integers(-2, 3)))], [F(0), F(0), F(1)]]
        N = PhiModule(M.space, matmul(matmul(g, M.phi), inverse(g, QQ)))
        sM, sN = frobenius_splitting(M), frobenius_splitting(N)
        for n in sM.weights:
            moved = Subspace.span([[sum(g[i][k] * v[k] for k in range(3)) for i in range(3)] for v in sM.lifts[n]],
                                  3, QQ)
            assert moved == sN.component(n)


def test_json_round_trip():
    M = running_module()
    assert PhiModule.from_json(M.to_json(), QQ).phi == M.phi


def test_nearly_overlapping_spectra_consume_precision():
    """Eigenvalues 1 and 1 + 3^k: the ledger charges k digits until the spectra meet."""
    D = PadicField(3, 4)
    for k in (1, 2, 3):
        s = frobenius_splitting(module_from_matrix([[1 + F(3) ** k, F(1)], [F(0), F(1)]], [-2, 0], D))
        lift = s.lifts[0][0][0]
        assert s.loss == k and lift.prec == 4 - k
        assert lift == D(F(-1, 3**k))
    with pytest.raises(SpectraNotDisjointError):
        frobenius_splitting(module_from_matrix([[F(82), F(1)], [F(0), F(1)]], [-2, 0], D))


def test_random_invertible_unit_determinant():
    for rng in trial_rngs(25, 10):
        g = random_invertible(rng, 4, QQ, unit_at=3)
        assert det(g, QQ) % 3 != 0
