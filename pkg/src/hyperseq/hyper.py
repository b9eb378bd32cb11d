"""Germs: the computable fragment of the ultrapower *R.

A :class:`Germ` stands for the hyperreal ``<a_n>`` where ``a_n`` is, on
each residue class ``n = r (mod m)``, a rational function of ``n``.  Ring
operations are fragment-free (they are the same in every ultrapower);
inverse, order, classification and standard part read the piece that an
:class:`~hyperseq.filters.UltraFragment` selects.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import DivisionByZeroGerm, NotFinite, ParseError
from .filters import DEFAULT_FRAGMENT, UltraFragment
from .poly import Poly, RatFunc, format_ratfunc, sign


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


class Germ:
    __slots__ = ("modulus", "pieces", "threshold", "_hash")

    def __init__(self, pieces: Sequence[RatFunc], threshold: int = 0):
        pieces = tuple(pieces)
        if not pieces:
            raise ValueError("a germ needs at least one piece")
        m = len(pieces)
        for d in _divisors(m):
            if all(pieces[r] == pieces[r % d] for r in range(d, m)):
                pieces = pieces[:d]
                break
        bound = max(p.pole_free_from() for p in pieces)
        self.modulus = len(pieces)
        self.pieces = pieces
        self.threshold = max(int(threshold), bound)
        self._hash = None

    @classmethod
    def const(cls, c) -> "Germ":
        return cls((RatFunc.const(Fraction(c)),))

    @classmethod
    def index(cls) -> "Germ":
        return cls((RatFunc.index(),))

    @classmethod
    def lift(cls, x) -> "Germ":
        return x if isinstance(x, Germ) else cls.const(x)

    # ---- access -------------------------------------------------------
    def piece(self, residue: int) -> RatFunc:
        return self.pieces[residue % self.modulus]

    def selected(self, u: UltraFragment = DEFAULT_FRAGMENT) -> RatFunc:
        return self.pieces[u.residue(self.modulus)]

    def selected_residue(self, u: UltraFragment = DEFAULT_FRAGMENT) -> int:
        return u.residue(self.modulus)

    def refine(self, m: int) -> tuple[RatFunc, ...]:
        if m % self.modulus:
            raise ValueError(f"{m} is not a multiple of {self.modulus}")
        return tuple(self.pieces[r % self.modulus] for r in range(m))

    def __call__(self, n: int) -> Fraction | None:
        """Value of the representative sequence at n (None at a pole)."""
        return self.pieces[n % self.modulus](n)

    def is_zero(self) -> bool:
        """Zero in every ultrapower (all classes vanish)."""
        return all(p.is_zero() for p in self.pieces)

    def is_constant(self) -> bool:
        return self.modulus == 1 and self.pieces[0].is_const()

    # ---- ring ---------------------------------------------------------
    def _binary(self, other, fn) -> "Germ":
        other = Germ.lift(other)
        m = lcm(self.modulus, other.modulus)
        a, b = self.refine(m), other.refine(m)
        return Germ([fn(x, y) for x, y in zip(a, b)], max(self.threshold, other.threshold))

    def __add__(self, other) -> "Germ":
        return self._binary(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other) -> "Germ":
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other) -> "Germ":
        return Germ.lift(other) - self

    def __mul__(self, other) -> "Germ":
        return self._binary(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __neg__(self) -> "Germ":
        return Germ([-p for p in self.pieces], self.threshold)

    def __pow__(self, k: int) -> "Germ":
        if k < 0:
            return self.reciprocal_strict() ** (-k)
        return Germ([p ** k for p in self.pieces], self.threshold)

    def reciprocal_strict(self) -> "Germ":
        """Classwise reciprocal; every class must be nonzero."""
        for r, p in enumerate(self.pieces):
            if p.is_zero():
                raise DivisionByZeroGerm(f"divisor vanishes identically on the class n = {r} mod {self.modulus}")
        return Germ([p.reciprocal() for p in self.pieces], self.threshold)

    def divide_strict(self, other) -> "Germ":
        return self * Germ.lift(other).reciprocal_strict()

    def __truediv__(self, other) -> "Germ":
        return self.divide_strict(other)

    def __rtruediv__(self, other) -> "Germ":
        return Germ.lift(other).divide_strict(self)

    # ---- identity ------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Germ.const(other)
        if not isinstance(other, Germ):
            return NotImplemented
        return self.modulus == other.modulus and self.pieces == other.pieces

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.pieces)
        return self._hash

    def format(self) -> str:
        if self.modulus == 1:
            return format_ratfunc(self.pieces[0])
        return f"case({self.modulus}; " + ", ".join(format_ratfunc(p) for p in self.pieces) + ")"

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return f"Germ({self.format()}, T={self.threshold})"


# ---- fragment-relative operations ----------------------------------------

class Order(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"


class FrechetOrder(enum.Enum):
    LESS_EQ = "LessEq"
    GREATER_EQ = "GreaterEq"
    EQUAL = "Equal"
    INCOMPARABLE = "Incomparable"


def arith(op: str, x, y) -> Germ:
    x, y = Germ.lift(x), Germ.lift(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


def inverse(x: Germ, u: UltraFragment = DEFAULT_FRAGMENT) -> Germ:
    """Reciprocal relative to ``u``; classes where x vanishes become zero."""
    if x.selected(u).is_zero():
        raise DivisionByZeroGerm(f"{x} is zero relative to the fragment")
    return Germ([RatFunc.const(0) if p.is_zero() else p.reciprocal() for p in x.pieces], x.threshold)


def eventual_sign(x: Germ, u: UltraFragment = DEFAULT_FRAGMENT) -> int:
    return x.selected(u).eventual_sign()


def _selected_difference(x, y, u: UltraFragment) -> RatFunc:
    """Selected piece of x - y, without forming the other classes."""
    x, y = Germ.lift(x), Germ.lift(y)
    r = u.residue(lcm(x.modulus, y.modulus))
    return x.piece(r) - y.piece(r)


def compare(x, y, u: UltraFragment = DEFAULT_FRAGMENT) -> Order:
    s = _selected_difference(x, y, u).eventual_sign()
    return Order.LESS if s < 0 else Order.GREATER if s > 0 else Order.EQUAL


def equal_under(x, y, u: UltraFragment = DEFAULT_FRAGMENT) -> bool:
    return compare(x, y, u) is Order.EQUAL


def frechet_compare(x, y) -> FrechetOrder:
    """Order modulo cofinite agreement only; may be incomparable."""
    d = Germ.lift(x) - Germ.lift(y)
    signs = {p.eventual_sign() for p in d.pieces}
    if signs == {0}:
        return FrechetOrder.EQUAL
    if 1 in signs and -1 in signs:
        return FrechetOrder.INCOMPARABLE
    return FrechetOrder.LESS_EQ if -1 in signs else FrechetOrder.GREATER_EQ


@dataclass(frozen=True)
class Classification:
    infinitesimal: bool
    finite: bool
    infinitely_large: bool
    standard: bool
    standard_value: Fraction | None = None

    def as_dict(self) -> dict:
        return {
            "infinitesimal": self.infinitesimal,
            "finite": self.finite,
            "infinitely_large": self.infinitely_large,
            "standard": self.standard,
            "standard_value": None if self.standard_value is None else format_rational(self.standard_value),
        }


def classify(x, u: UltraFragment = DEFAULT_FRAGMENT) -> Classification:
    f = Germ.lift(x).selected(u)
    dp, dq = f.num.degree, f.den.degree
    infinitesimal = f.is_zero() or dp < dq
    finite = dp <= dq
    standard = f.is_const()
    return Classification(
        infinitesimal=infinitesimal,
        finite=finite,
        infinitely_large=not finite,
        standard=standard,
        standard_value=f.const_value() if standard else None,
    )


def standard_part(x, u: UltraFragment = DEFAULT_FRAGMENT) -> Fraction:
    f = Germ.lift(x).selected(u)
    lim = f.limit()
    if lim is None:
        raise NotFinite(f"{x} is infinitely large relative to the fragment")
    return lim


def is_near(x, y, u: UltraFragment = DEFAULT_FRAGMENT) -> bool:
    d = _selected_difference(x, y, u)
    return d.is_zero() or d.num.degree < d.den.degree


def decompose(x, u: UltraFragment = DEFAULT_FRAGMENT) -> tuple[Fraction, Germ]:
    """Split a finite x into (st(x), infinitesimal remainder)."""
    r = standard_part(x, u)
    return r, Germ.lift(x) - r


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    """Parse ``p`` or ``p/q`` (no decimals, q > 0)."""
    m = re.fullmatch(r"\s*(-?\d+)\s*(?:/\s*(\d+)\s*)?", text)
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        raise ParseError(f"not an exact rational: {text!r}", (0, len(text.encode())), text)
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


__all__ = [
    "Germ", "Order", "FrechetOrder", "Classification", "arith", "inverse", "compare",
    "equal_under", "frechet_compare", "classify", "standard_part", "is_near", "decompose",
    "eventual_sign", "format_rational", "parse_rational", "Poly", "RatFunc", "sign",
]
