"""Scalar domains: exact rationals or p-adics at a fixed relative precision."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..errors import DomainMismatchError
from .padic import INF, PadicNumber, is_prime

Rational = Fraction


@dataclass(frozen=True)
class RationalField:
    """The field of rational numbers; elements are ``Fraction`` (or ``int``)."""

    tag = "RATIONAL"

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def __call__(self, x) -> Fraction:
        if isinstance(x, PadicNumber):
            raise DomainMismatchError("cannot coerce a p-adic number into the rationals")
        if isinstance(x, str):
            return Fraction(x.strip())
        return Fraction(x)

    def is_zero(self, x) -> bool:
        return x == 0

    def valuation(self, x):
        return INF if x == 0 else 0

    def relative_precision(self, x):
        return INF

    def to_json(self, x) -> str:
        x = Fraction(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    def from_json(self, obj) -> Fraction:
        return self(obj)

    def describe(self) -> dict:
        return {"tag": self.tag}

    def __str__(self):
        return "QQ"


@dataclass(frozen=True)
class PadicField:
    """Q_p with relative precision cap ``N``."""

    p: int
    N: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.N <= 0:
            raise ValueError(f"precision N = {self.N} must be positive")

    tag = "PADIC"

    @property
    def zero(self):
        return PadicNumber.zero(self.p, INF, self.N)

    @property
    def one(self):
        return PadicNumber(self.p, 0, 1, self.N, self.N)

    def __call__(self, x) -> PadicNumber:
        if isinstance(x, PadicNumber):
            if x.p != self.p:
                raise DomainMismatchError(f"p-adic primes differ: {x.p} vs {self.p}")
            return x
        if isinstance(x, dict):
            return PadicNumber.from_json(x, self.N)
        if isinstance(x, str):
            x = Fraction(x.strip())
        return PadicNumber.from_rational(x, self.p, self.N)

    def is_zero(self, x) -> bool:
        if isinstance(x, PadicNumber):
            return x.val == INF
        return x == 0

    def valuation(self, x):
        if isinstance(x, PadicNumber):
            return x.val
        return self(x).val

    def relative_precision(self, x):
        if isinstance(x, PadicNumber):
            return x.prec if x.val != INF else INF
        return INF

    def to_json(self, x) -> dict:
        return self(x).to_json()

    def from_json(self, obj) -> PadicNumber:
        return self(obj)

    def describe(self) -> dict:
        return {"tag": self.tag, "p": self.p, "N": self.N}

    def __str__(self):
        return f"Q_{self.p} (N={self.N})"


ScalarDomain = RationalField | PadicField

QQ = RationalField()


def domain_of(*values, default=QQ):
    """Infer the domain of nested scalar containers (first p-adic entry wins)."""
    stack = list(values)
    while stack:
        v = stack.pop()
        if isinstance(v, PadicNumber):
            return PadicField(v.p, v.cap)
        if isinstance(v, (list, tuple)):
            stack.extend(v)
    return default


def domain_from_json(obj: dict):
    if obj.get("tag") == "PADIC":
        return PadicField(int(obj["p"]), int(obj["N"]))
    return QQ
