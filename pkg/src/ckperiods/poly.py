"""Sparse multivariate polynomials, Buchberger's algorithm and elimination.

Coefficients are Fractions for Groebner computations; evaluation and ring
operations also work with p-adic coefficients, so polynomials can be used as
scalars inside the Lie-algebra code (e.g. universal coordinates on a group).
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import SizeLimitError, ValidationError
from .scalars.linalg import nz

DEFAULT_MAX_BASIS = 200
DEFAULT_MAX_PAIRS = 5000


def lex_key(e):
    return e


def grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


ORDERS = {"lex": lex_key, "grevlex": grevlex_key}


class Polynomial:
    __slots__ = ("vars", "terms")

    def __init__(self, variables, terms=None):
        self.vars = tuple(variables)
        self.terms = {e: c for e, c in (terms or {}).items() if nz(c)}

    # construction ------------------------------------------------------------

    @classmethod
    def constant(cls, variables, c) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def variable(cls, variables, name: str, coeff=Fraction(1)) -> "Polynomial":
        variables = tuple(variables)
        e = tuple(1 if v == name else 0 for v in variables)
        if sum(e) != 1:
            raise ValidationError(f"unknown variable {name}")
        return cls(variables, {e: coeff})

    @classmethod
    def generators(cls, variables):
        return [cls.variable(variables, v) for v in variables]

    @classmethod
    def parse(cls, text: str, variables) -> "Polynomial":
        """Parse a polynomial with rational coefficients in the declared variables."""
        import sympy
        from sympy.parsing.sympy_parser import parse_expr, standard_transformations

        variables = tuple(variables)
        syms = sympy.symbols(variables) if variables else ()
        if len(variables) == 1:
            syms = (syms,) if not isinstance(syms, tuple) else syms
        local = dict(zip(variables, syms))
        expr = parse_expr(text, local_dict=local, transformations=standard_transformations, evaluate=True)
        extra = expr.free_symbols - set(syms)
        if extra:
            raise ValidationError(f"undeclared variables {sorted(map(str, extra))}")
        P = sympy.Poly(sympy.expand(expr), *syms) if syms else None
        if P is None:
            return cls.constant(variables, Fraction(str(sympy.Rational(expr))))
        terms = {}
        for mon, c in P.terms():
            rc = sympy.Rational(c)
            terms[tuple(mon)] = Fraction(int(rc.p), int(rc.q))
        return cls(variables, terms)

    # queries ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self):
        return self.terms.get((0,) * len(self.vars), 0)

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def uses(self, indices) -> bool:
        return any(any(e[i] for i in indices) for e in self.terms)

    # arithmetic --------------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, Polynomial):
            if other.vars != self.vars:
                raise ValidationError("polynomials over different variable lists")
            return other
        return Polynomial.constant(self.vars, other)

    def __add__(self, other):
        o = self._lift(other)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out[e] + c if e in out else c
        return Polynomial(self.vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if not nz(other):
                return Polynomial(self.vars)
            return Polynomial(self.vars, {e: c * other for e, c in self.terms.items()})
        o = self._lift(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out[e] + c1 * c2 if e in out else c1 * c2
        return Polynomial(self.vars, out)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, Polynomial):
            if not other.is_constant():
                raise ValidationError("division by a non-constant polynomial")
            other = other.constant_term()
        return Polynomial(self.vars, {e: c / other for e, c in self.terms.items()})

    def __pow__(self, n: int):
        out = Polynomial.constant(self.vars, Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        try:
            o = self._lift(other)
        except ValidationError:
            return False
        return (self - o).is_zero()

    def __ne__(self, other):
        return not self == other

    __hash__ = None

    # evaluation ----------------------------------------------------------------

    def evaluate(self, values):
        """Value at a point given as a sequence (in variable order) or a name -> value dict."""
        if isinstance(values, dict):
            values = [values[v] for v in self.vars]
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(values, e):
                if k:
                    term = term * x ** k
            total = total + term
        return total

    def substitute(self, images: list) -> "Polynomial":
        """Compose with polynomials ``images`` (one per variable, over a common ring)."""
        if len(images) != len(self.vars):
            raise ValidationError("substitution needs one image per variable")
        target = images[0].vars if images else ()
        total = Polynomial(target)
        for e, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for img, k in zip(images, e):
                if k:
                    term = term * img ** k
            total = total + term
        return total

    def extend(self, variables) -> "Polynomial":
        """The same polynomial in a larger variable list containing the current one."""
        variables = tuple(variables)
        idx = [variables.index(v) for v in self.vars]
        out = {}
        for e, c in self.terms.items():
            ne = [0] * len(variables)
            for i, k in zip(idx, e):
                ne[i] = k
            out[tuple(ne)] = c
        return Polynomial(variables, out)

    def restrict(self, variables) -> "Polynomial":
        """Drop variables that do not occur."""
        variables = tuple(variables)
        idx = [self.vars.index(v) for v in variables]
        out = {}
        for e, c in self.terms.items():
            if any(k for i, k in enumerate(e) if i not in idx):
                raise ValidationError("polynomial uses a dropped variable")
            out[tuple(e[i] for i in idx)] = c
        return Polynomial(variables, out)

    # orders --------------------------------------------------------------------

    def leading(self, order: str = "lex"):
        key = ORDERS[order]
        e = max(self.terms, key=key)
        return e, self.terms[e]

    def monic(self, order: str = "lex") -> "Polynomial":
        if self.is_zero():
            return self
        _, c = self.leading(order)
        return self / c

    def sorted_terms(self, order: str = "lex"):
        key = ORDERS[order]
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    # display -------------------------------------------------------------------

    def to_string(self, order: str = "grevlex") -> str:
        if not self.terms:
            return "0"
        out = ""
        for e, c in self.sorted_terms(order):
            mon = "*".join(v if k == 1 else f"{v}**{k}" for v, k in zip(self.vars, e) if k)
            neg = isinstance(c, Fraction) and c < 0
            cs = _coeff_str(-c if neg else c)
            term = mon if mon and cs == "1" else (f"{cs}*{mon}" if mon else cs)
            if not out:
                out = ("-" if neg else "") + term
            else:
                out += (" - " if neg else " + ") + term
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.to_string()!r}, vars={self.vars})"

    def to_json(self) -> dict:
        return {"vars": list(self.vars), "poly": self.to_string()}


def _coeff_str(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return f"({c})"


# Groebner bases --------------------------------------------------------------


def _divides(a, b) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def reduce(f: Polynomial, G: list, order: str = "lex") -> Polynomial:
    """Normal form of f modulo G (full reduction)."""
    key = ORDERS[order]
    leads = [(g.leading(order), g) for g in G if not g.is_zero()]
    rest = dict(f.terms)
    out: dict = {}
    while rest:
        e = max(rest, key=key)
        c = rest[e]
        for (le, lc), g in leads:
            if _divides(le, e):
                shift = tuple(x - y for x, y in zip(e, le))
                f_ = c / lc
                for ge, gc in g.terms.items():
                    ne = tuple(a + b for a, b in zip(ge, shift))
                    nv = rest.get(ne, 0) - f_ * gc
                    if nv:
                        rest[ne] = nv
                    else:
                        rest.pop(ne, None)
                break
        else:
            out[e] = c
            del rest[e]
    return Polynomial(f.vars, out)


def s_polynomial(f: Polynomial, g: Polynomial, order: str = "lex") -> Polynomial:
    (ef, cf), (eg, cg) = f.leading(order), g.leading(order)
    L = _lcm(ef, eg)
    mf = Polynomial(f.vars, {tuple(a - b for a, b in zip(L, ef)): Fraction(1) / cf})
    mg = Polynomial(g.vars, {tuple(a - b for a, b in zip(L, eg)): Fraction(1) / cg})
    return mf * f - mg * g


def buchberger(gens: list, order: str = "lex", max_basis: int = DEFAULT_MAX_BASIS,
               max_pairs: int = DEFAULT_MAX_PAIRS) -> list:
    """Reduced Groebner basis (monic, sorted by leading monomial descending)."""
    G = [g.monic(order) for g in gens if not g.is_zero()]
    if not G:
        return []
    for g in G:
        for c in g.terms.values():
            if not isinstance(c, (Fraction, int)):
                raise ValidationError("Groebner bases are computed over the rationals only")
    pairs = list(combinations(range(len(G)), 2))
    processed = 0
    while pairs:
        i, j = pairs.pop(0)
        processed += 1
        if processed > max_pairs:
            raise SizeLimitError("Groebner computation exceeded the pair budget", {"pairs": max_pairs})
        ei, ej = G[i].leading(order)[0], G[j].leading(order)[0]
        # coprime leading monomials: the S-polynomial reduces to zero
        if all(a == 0 or b == 0 for a, b in zip(ei, ej)):
            continue
        r = reduce(s_polynomial(G[i], G[j], order), G, order)
        if not r.is_zero():
            G.append(r.monic(order))
            if len(G) > max_basis:
                raise SizeLimitError("Groebner basis exceeded the size limit", {"basis": max_basis})
            pairs.extend((k, len(G) - 1) for k in range(len(G) - 1))
    return reduced_basis(G, order)


def reduced_basis(G: list, order: str = "lex") -> list:
    key = ORDERS[order]
    G = [g for g in G if not g.is_zero()]
    minimal = []
    for i, g in enumerate(G):
        lg = g.leading(order)[0]
        dominated = False
        for j, h in enumerate(G):
            if i == j:
                continue
            lh = h.leading(order)[0]
            if _divides(lh, lg) and (lh != lg or j < i):
                dominated = True
                break
        if not dominated:
            minimal.append(g)
    out = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        out.append(reduce(g, others, order).monic(order))
    return sorted(out, key=lambda g: key(g.leading(order)[0]), reverse=True)


def ideal_contains(G: list, f: Polynomial, order: str = "lex") -> bool:
    return reduce(f, G, order).is_zero()


def eliminate(images: list, target_vars, order: str = "lex", **limits) -> list:
    """Generators of the kernel of k[targets] -> k[sources], y_i -> images[i].

    The image closure is cut out by the graph ideal (y_i - f_i) with the source
    variables eliminated in a lex order placing sources first.
    """
    target_vars = tuple(target_vars)
    if len(images) != len(target_vars):
        raise ValidationError("one image polynomial per target variable is required")
    src = images[0].vars if images else ()
    clash = set(src) & set(target_vars)
    if clash:
        raise ValidationError(f"source and target variables overlap: {sorted(clash)}")
    allv = tuple(src) + target_vars
    graph = [Polynomial.variable(allv, y) - f.extend(allv) for y, f in zip(target_vars, images)]
    G = buchberger(graph, "lex", **limits)
    ns = len(src)
    out = [g.restrict(target_vars) for g in G if not g.uses(range(ns))]
    return out
