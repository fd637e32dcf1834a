"""Capped relative-precision p-adic numbers.

A nonzero value is ``p**val * unit`` with ``unit`` a p-adic unit known modulo
``p**prec``.  A zero carries its absolute precision in ``prec`` (``INF`` for an
exact zero).  Arithmetic follows the usual worst-case propagation: sums keep the
smaller absolute precision, products and quotients the smaller relative one.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC

from ..errors import DomainMismatchError

INF = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def split_valuation(n: int, p: int) -> tuple[int, int]:
    """Return (v, m) with n = p**v * m and p not dividing m (n nonzero)."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v, n


class PadicNumber:
    __slots__ = ("p", "val", "unit", "prec", "cap")

    def __init__(self, p: int, val, unit: int, prec, cap: int):
        self.p = p
        self.val = val
        self.unit = unit
        self.prec = prec
        self.cap = cap

    # construction -------------------------------------------------------

    @classmethod
    def zero(cls, p: int, absprec=INF, cap: int = 20) -> "PadicNumber":
        return cls(p, INF, 0, absprec, cap)

    @classmethod
    def from_rational(cls, a, p: int, N: int) -> "PadicNumber":
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if N <= 0:
            raise ValueError(f"precision N = {N} must be positive")
        a = Fraction(a)
        if a == 0:
            return cls.zero(p, INF, N)
        vn, num = split_valuation(a.numerator, p)
        vd, den = split_valuation(a.denominator, p)
        mod = p**N
        unit = num * pow(den, -1, mod) % mod
        return cls(p, vn - vd, unit, N, N)

    @classmethod
    def from_residue(cls, p: int, x: int, shift: int, absprec: int, cap: int) -> "PadicNumber":
        """The number x * p**shift known modulo p**absprec."""
        if absprec == INF:
            raise ValueError("residue constructor needs a finite absolute precision")
        if absprec <= shift:
            return cls.zero(p, absprec, cap)
        x %= p ** (absprec - shift)
        if x == 0:
            return cls.zero(p, absprec, cap)
        v, u = split_valuation(x, p)
        val = shift + v
        prec = min(absprec - val, cap)
        return cls(p, val, u % p**prec, prec, cap)

    # basic queries --------------------------------------------------------

    def is_zero(self) -> bool:
        return self.val == INF

    def __bool__(self) -> bool:
        return self.val != INF

    @property
    def absprec(self):
        return self.prec if self.val == INF else self.val + self.prec

    def valuation(self):
        return self.val

    def lift(self) -> Fraction:
        """Rational representative p**val * unit (0 for zero)."""
        if self.val == INF:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def is_exact_zero(self) -> bool:
        return self.val == INF and self.prec == INF

    # coercion -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise DomainMismatchError(f"p-adic primes differ: {self.p} vs {other.p}")
            return other
        if isinstance(other, (int, _RationalABC)) and not isinstance(other, bool):
            return PadicNumber.from_rational(other, self.p, self.cap)
        return NotImplemented

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        cap = max(self.cap, o.cap)
        if o.val == INF:
            if self.val == INF:
                return PadicNumber(p, INF, 0, min(self.prec, o.prec), cap)
            if o.prec >= self.absprec:
                return self
            return PadicNumber.from_residue(p, self.unit, self.val, o.prec, cap)
        if self.val == INF:
            if self.prec >= o.absprec:
                return o
            return PadicNumber.from_residue(p, o.unit, o.val, self.prec, cap)
        v = min(self.val, o.val)
        absprec = min(self.absprec, o.absprec)
        x = self.unit * p ** (self.val - v) + o.unit * p ** (o.val - v)
        return PadicNumber.from_residue(p, x, v, absprec, cap)

    __radd__ = __add__

    def __neg__(self):
        if self.val == INF:
            return self
        return PadicNumber(self.p, self.val, (-self.unit) % self.p**self.prec, self.prec, self.cap)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.p
        cap = max(self.cap, o.cap)
        if self.val == INF or o.val == INF:
            if self.val == INF and o.val == INF:
                absprec = self.prec + o.prec
            elif self.val == INF:
                absprec = self.prec + o.val
            else:
                absprec = o.prec + self.val
            return PadicNumber(p, INF, 0, absprec, cap)
        prec = min(self.prec, o.prec)
        return PadicNumber(p, self.val + o.val, self.unit * o.unit % p**prec, prec, cap)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.val == INF:
            raise ZeroDivisionError("inverse of a p-adic zero")
        mod = self.p**self.prec
        return PadicNumber(self.p, -self.val, pow(self.unit, -1, mod), self.prec, self.cap)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.val == INF:
            raise ZeroDivisionError("division by a p-adic zero")
        if self.val == INF:
            return PadicNumber(self.p, INF, 0, self.prec - o.val, max(self.cap, o.cap))
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicNumber(self.p, 0, 1, self.cap, self.cap)
        if self.val == INF:
            return PadicNumber(self.p, INF, 0, self.prec * n if self.prec != INF else INF, self.cap)
        mod = self.p**self.prec
        return PadicNumber(self.p, self.val * n, pow(self.unit, n, mod), self.prec, self.cap)

    # comparison -----------------------------------------------------------

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except DomainMismatchError:
            return False
        if o is NotImplemented:
            return NotImplemented
        return (self - o).val == INF

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    # display --------------------------------------------------------------

    def __repr__(self):
        if self.val == INF:
            return f"PadicNumber(p={self.p}, zero, absprec={self.prec})"
        return f"PadicNumber(p={self.p}, val={self.val}, unit={self.unit}, prec={self.prec})"

    def __str__(self):
        if self.val == INF:
            return "0" if self.prec == INF else f"O({self.p}^{self.prec})"
        return f"{self.unit}*{self.p}^{self.val} + O({self.p}^{self.absprec})"

    def to_json(self) -> dict:
        if self.val == INF:
            return {"p": self.p, "val": None, "unit": "0",
                    "prec": None if self.prec == INF else self.prec}
        return {"p": self.p, "val": self.val, "unit": str(self.unit), "prec": self.prec}

    @classmethod
    def from_json(cls, obj: dict, cap: int | None = None) -> "PadicNumber":
        p = int(obj["p"])
        if obj.get("val") is None:
            prec = obj.get("prec")
            return cls.zero(p, INF if prec is None else int(prec), cap or 20)
        prec = int(obj["prec"])
        unit = int(obj["unit"]) % p**prec
        if unit % p == 0:
            raise ValueError("p-adic unit must be prime to p")
        return cls(p, int(obj["val"]), unit, prec, cap or prec)


def padic_from_rational(a, p: int, N: int) -> PadicNumber:
    return PadicNumber.from_rational(a, p, N)
