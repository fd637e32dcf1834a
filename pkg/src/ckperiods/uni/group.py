"""Unipotent groups in exponential coordinates, torus actions, and actions of one
unipotent group on another through derivations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import RelationsViolatedError, ValidationError
from ..scalars.linalg import matmul, matvec, nz
from .bch import bch
from .lie import GradedLieAlgebra, semidirect


class GroupElement:
    """exp(x) for x in the Lie algebra, stored by the coordinates of x."""

    __slots__ = ("alg", "coords")

    def __init__(self, alg: GradedLieAlgebra, coords):
        if len(coords) != alg.dim:
            raise ValidationError(f"expected {alg.dim} coordinates, got {len(coords)}")
        self.alg = alg
        self.coords = list(coords)

    @classmethod
    def identity(cls, alg: GradedLieAlgebra, zero=Fraction(0)) -> "GroupElement":
        return cls(alg, [zero] * alg.dim)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.alg, bch(self.alg, self.coords, other.coords))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.alg, [-a for a in self.coords])

    def __pow__(self, n: int) -> "GroupElement":
        return GroupElement(self.alg, [a * n for a in self.coords])

    def is_identity(self) -> bool:
        return not any(nz(a) for a in self.coords)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.alg is other.alg and not any(nz(a - b) for a, b in zip(self.coords, other.coords))

    __hash__ = None

    def to_json(self, domain) -> list:
        return [domain.to_json(a) for a in self.coords]

    def __repr__(self):
        return f"GroupElement({self.coords})"


def torus_character(alg: GradedLieAlgebra, t, i: int):
    """t^(multiweight of e_i); a scalar t stands for the weight cocharacter."""
    if isinstance(t, (tuple, list)):
        if alg.multiweights is None:
            raise ValidationError("algebra carries no torus multiweights")
        out = 1
        for tk, m in zip(t, alg.multiweights[i]):
            out = out * tk ** m
        return out
    return t ** alg.weights[i]


def act_torus(alg: GradedLieAlgebra, t, coords):
    return [a * torus_character(alg, t, i) if nz(a) else a for i, a in enumerate(coords)]


def exp_derivation_apply(D, x, max_terms: int):
    """exp(D) x for a nilpotent matrix D."""
    out = list(x)
    term = list(x)
    for k in range(1, max_terms + 1):
        term = matvec(D, term)
        if not any(nz(a) for a in term):
            break
        term = [a * Fraction(1, k) for a in term]
        out = [a + b for a, b in zip(out, term)]
    return out


@dataclass
class UAction:
    """Action of a free graded U on pi through derivations D_b, one per U basis element."""

    U: GradedLieAlgebra
    pi: GradedLieAlgebra
    derivations: list

    @classmethod
    def from_generators(cls, U: GradedLieAlgebra, pi: GradedLieAlgebra, gen_values: dict) -> "UAction":
        """``gen_values[u_gen][pi_gen] = vector``; missing entries are zero."""
        if not U.is_free:
            raise ValidationError("the acting group must be free")
        n = pi.dim
        mats = {}
        for ug in range(len(U.generators)):
            vals = gen_values.get(ug, {})
            mats[ug] = pi.extend_derivation(vals)
        derivs = []
        for t in U.trees:
            if t[0] == "gen":
                derivs.append(mats[t[1]])
            else:
                A, B = derivs[t[1]], derivs[t[2]]
                derivs.append(_commutator(A, B, n))
        act = cls(U, pi, derivs)
        act.validate()
        return act

    @classmethod
    def trivial(cls, U: GradedLieAlgebra, pi: GradedLieAlgebra) -> "UAction":
        n = pi.dim
        return cls(U, pi, [[[0] * n for _ in range(n)] for _ in range(U.dim)])

    def validate(self) -> None:
        n = self.pi.dim
        U = self.U
        for b, D in enumerate(self.derivations):
            for i in range(n):
                for k in range(n):
                    if nz(D[k][i]):
                        if self.pi.weights[k] != self.pi.weights[i] + U.weights[b]:
                            raise ValidationError(f"derivation of {U.names[b]} does not shift weights by {U.weights[b]}")
                        if U.multiweights is not None and self.pi.multiweights is not None:
                            s = tuple(a + c for a, c in zip(self.pi.multiweights[i], U.multiweights[b]))
                            if self.pi.multiweights[k] != s:
                                raise ValidationError(f"derivation of {U.names[b]} is not torus-equivariant")
        # the bracket of U must map to the commutator of derivations
        for a in range(U.dim):
            for b in range(a + 1, U.dim):
                expected = _commutator(self.derivations[a], self.derivations[b], n)
                got = [[0] * n for _ in range(n)]
                for k, c in U.structure_bracket(a, b).items():
                    got = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(got, self.derivations[k])]
                if any(nz(x - y) for r1, r2 in zip(expected, got) for x, y in zip(r1, r2)):
                    raise RelationsViolatedError(
                        f"derivations of {U.names[a]} and {U.names[b]} do not satisfy the bracket relations at this depth")

    def is_trivial(self) -> bool:
        return not any(nz(x) for D in self.derivations for row in D for x in row)

    def derivation(self, u):
        n = self.pi.dim
        out = [[0] * n for _ in range(n)]
        for b, c in enumerate(u):
            if nz(c):
                D = self.derivations[b]
                out = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(out, D)]
        return out

    def act(self, u, x):
        """u(x) for u in U and x in pi (both in exponential coordinates)."""
        if not any(nz(a) for a in u) or self.is_trivial():
            return list(x)
        return exp_derivation_apply(self.derivation(u), x, self.pi.depth + 1)

    def semidirect(self) -> GradedLieAlgebra:
        return semidirect(self.pi, self.U, self.derivations)


def _commutator(A, B, n: int):
    AB = matmul(A, B) if n else []
    BA = matmul(B, A) if n else []
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(AB, BA)]
