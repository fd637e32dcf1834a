"""Matrix representations of graded nilpotent Lie algebras."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NoSolutionError, NotInImageError, RelationsViolatedError, ValidationError
from ..scalars.linalg import exp_nilpotent, log_unipotent, matmul, nz, rank, solve_linear
from .lie import GradedLieAlgebra


def _mat_comm(A, B):
    AB, BA = matmul(A, B), matmul(B, A)
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(AB, BA)]


def _mat_lin(terms, n: int):
    out = [[0] * n for _ in range(n)]
    for c, M in terms:
        if nz(c):
            out = [[x + c * y for x, y in zip(r1, r2)] for r1, r2 in zip(out, M)]
    return out


@dataclass
class Representation:
    alg: GradedLieAlgebra
    size: int
    matrices: list
    domain: object = None

    def matrix_of(self, x):
        return _mat_lin(zip(x, self.matrices), self.size)

    def exp(self, x):
        return exp_nilpotent(self.matrix_of(x))

    def pullback(self, M, domain=None):
        """Coordinates u with exp(rho(u)) = M; NOT_IN_IMAGE when no such u exists."""
        domain = domain or self.domain
        L = log_unipotent(M)
        n, d = self.size, self.alg.dim
        A = [[self.matrices[k][i][j] for k in range(d)] for i in range(n) for j in range(n)]
        b = [L[i][j] for i in range(n) for j in range(n)]
        if d == 0:
            if any(nz(x) for x in b):
                raise NotInImageError("matrix is not the identity but the group is trivial")
            return []
        try:
            sol = solve_linear(A, b, domain)
        except NoSolutionError as exc:
            raise NotInImageError("matrix is not in the image of the representation") from exc
        return sol.x

    def is_faithful(self) -> bool:
        n, d = self.size, self.alg.dim
        if d == 0:
            return True
        A = [[self.matrices[k][i][j] for k in range(d)] for i in range(n) for j in range(n)]
        return rank(A) == d


def standard_representation(alg: GradedLieAlgebra, gen_matrices: dict, size: int, domain=None) -> Representation:
    """Extend generator matrices (keyed by free-generator position) to a Lie homomorphism.

    For quotient algebras the relations are checked; RELATIONS_VIOLATED otherwise.
    Brackets that are truncated away in the algebra must also vanish in matrices.
    """
    P = alg.free_parent
    if P.trees is None:
        raise ValidationError("representations are defined on free algebras and their quotients")
    zero = [[0] * size for _ in range(size)]
    for g, M in gen_matrices.items():
        for i in range(size):
            for j in range(i + 1):
                if nz(M[i][j]):
                    raise ValidationError("generator matrices must be strictly upper triangular")
    vals = []
    for t in P.trees:
        if t[0] == "gen":
            vals.append(gen_matrices.get(t[1], zero))
        else:
            vals.append(_mat_comm(vals[t[1]], vals[t[2]]))
    for r in alg.ideal_vectors():
        if any(nz(x) for row in _mat_lin(zip(r, vals), size) for x in row):
            raise RelationsViolatedError("generator matrices do not satisfy the relations")
    mats = [vals[k] for k in alg.kept] if alg.parent is not None else vals
    rep = Representation(alg, size, mats, domain)
    # brackets beyond the truncation must vanish
    for a in range(alg.dim):
        for b in range(a + 1, alg.dim):
            expected = _mat_comm(mats[a], mats[b])
            got = _mat_lin([(c, mats[k]) for k, c in alg.structure_bracket(a, b).items()], size)
            if any(nz(x - y) for r1, r2 in zip(expected, got) for x, y in zip(r1, r2)):
                raise RelationsViolatedError(
                    f"[{alg.names[a]}, {alg.names[b]}] is not respected by the matrices at depth {alg.depth}")
    return rep
