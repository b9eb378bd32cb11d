"""Exact univariate polynomials and rational functions over Q.

Coefficients are :class:`fractions.Fraction`, stored low degree first.
Besides ring arithmetic this module provides the sign machinery the rest
of the package leans on: Cauchy root bounds, Sturm chains over primitive
integer polynomials, and exact integer Horner evaluation.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Sequence

Number = int | Fraction


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class Poly:
    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable[Number] = ()):
        cs = [_frac(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self._hash = None

    # construction helpers
    @classmethod
    def const(cls, c: Number) -> "Poly":
        return cls((c,))

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    # basic properties
    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_const(self) -> bool:
        return len(self.coeffs) <= 1

    def const_value(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly.const(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)})"

    # arithmetic
    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        other = _as_poly(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise ValueError("negative exponent")
        result = Poly.const(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c: Number) -> "Poly":
        c = _frac(c)
        return Poly(a * c for a in self.coeffs)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        if len(rem) - 1 < dq:
            return Poly(), self
        quot = [Fraction(0)] * (len(rem) - dq)
        for i in range(len(rem) - 1, dq - 1, -1):
            c = rem[i] / lc
            quot[i - dq] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i - dq + j] -= c * b
        return Poly(quot), Poly(rem[:dq])

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def compose(self, inner: "Poly") -> "Poly":
        """Return self(inner(n))."""
        result = Poly()
        for c in reversed(self.coeffs):
            result = result * inner + Poly.const(c)
        return result

    def __call__(self, x: Number) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def primitive_int(self) -> tuple[int, ...]:
        """Integer coefficients of a positive rational multiple of self.

        The multiplier is positive, so signs of values are preserved.
        """
        if not self.coeffs:
            return ()
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        ints = [int(c * den) for c in self.coeffs]
        g = reduce(gcd, ints, 0)
        return tuple(i // g for i in ints)


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    return Poly.const(x)


def _primitive(cs: list[int]) -> list[int]:
    g = reduce(gcd, cs, 0)
    return [c // g for c in cs] if g > 1 else cs


def _prem(a: list[int], b: list[int]) -> list[int]:
    """Pseudo-remainder of integer coefficient lists (low degree first)."""
    r = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(r) - 1 >= db and r:
        lr, shift = r[-1], len(r) - 1 - db
        r = [c * lb for c in r]
        for j, c in enumerate(b):
            r[shift + j] -= lr * c
        while r and r[-1] == 0:
            r.pop()
    return r


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both are zero), by the primitive remainder sequence
    over the integers, which keeps coefficient growth in check."""
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    x, y = list(a.primitive_int()), list(b.primitive_int())
    if len(x) < len(y):
        x, y = y, x
    while y:
        if len(y) == 1:
            return Poly.const(1)
        x, y = y, _primitive(_prem(x, y))
    return Poly(x).monic()


def squarefree(p: Poly) -> Poly:
    if p.degree <= 0:
        return p
    return p // poly_gcd(p, p.derivative())


def int_eval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def sign(v) -> int:
    return (v > 0) - (v < 0)


def cauchy_bound(p: Poly) -> Fraction:
    """Every complex root z of p satisfies |z| <= the returned value."""
    if p.degree <= 0:
        return Fraction(0)
    lc = abs(p.lc)
    return 1 + max(abs(c) for c in p.coeffs[:-1]) / lc


def root_free_from(p: Poly) -> int:
    """A natural T past every real root of p (from the Cauchy bound).

    p keeps a constant nonzero sign on [T, inf); T is not minimal.
    """
    if p.degree <= 0:
        return 0
    b = cauchy_bound(p)
    return int(b) + 1


class SturmChain:
    """Sturm sequence of a square-free polynomial, in primitive integer form."""

    __slots__ = ("chain",)

    def __init__(self, p: Poly):
        p = squarefree(p)
        seq = [p, p.derivative()]
        while not seq[-1].is_zero() and seq[-1].degree > 0:
            seq.append(-(seq[-2] % seq[-1]))
        if seq[-1].is_zero():
            seq.pop()
        self.chain = [q.primitive_int() for q in seq]

    def variations(self, x: int) -> int:
        count = 0
        last = 0
        for c in self.chain:
            s = sign(int_eval(c, x))
            if s:
                if last and s != last:
                    count += 1
                last = s
        return count

    def roots_between(self, a: int, b: int) -> int:
        """Number of distinct real roots in (a, b]; a must not be a root."""
        return self.variations(a) - self.variations(b)


def constant_sign_ranges(polys: Sequence[Poly], lo: int, hi: int, small: int = 16) -> list[tuple[int, int]]:
    """Split integers [lo, hi) into ranges on which every poly keeps its sign.

    Returns consecutive half-open ranges covering [lo, hi).  Within each
    returned range no polynomial in ``polys`` has a real root, except that
    ranges of length one may sit exactly on a root.
    """
    nonconst = [p for p in polys if p.degree > 0]
    if not nonconst or hi - lo <= 0:
        return [(lo, hi)] if hi > lo else []
    prod = Poly.const(1)
    for p in nonconst:
        prod = prod * squarefree(p)
    sq = squarefree(prod)
    chain = SturmChain(sq)
    ints = sq.primitive_int()
    out: list[tuple[int, int]] = []

    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        # closed integer range [a, b-1]
        last = b - 1
        if b - a <= small:
            out.extend((i, i + 1) for i in range(a, b))
            continue
        if int_eval(ints, a) != 0 and int_eval(ints, last) != 0 and chain.roots_between(a, last) == 0:
            out.append((a, b))
            continue
        mid = (a + b) // 2
        stack.append((mid, b))
        stack.append((a, mid))
    out.sort()
    return out


class RatFunc:
    """Reduced quotient p/q with q monic."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num: Poly, den: Poly | None = None, *, reduced: bool = False):
        if den is None:
            den = Poly.const(1)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if not reduced:
            if num.is_zero():
                den = Poly.const(1)
            elif num.degree > 0 and den.degree > 0:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num // g
                    den = den // g
            lc = den.lc
            if lc != 1:
                num = num.scale(1 / lc)
                den = den.scale(1 / lc)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def const(cls, c: Number) -> "RatFunc":
        return cls(Poly.const(c), reduced=True)

    @classmethod
    def index(cls) -> "RatFunc":
        return cls(Poly.x(), reduced=True)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatFunc):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self) -> str:
        return f"RatFunc({format_ratfunc(self)})"

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.degree == 0

    def is_const(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def const_value(self) -> Fraction:
        return self.num.const_value()

    def __add__(self, other: "RatFunc") -> "RatFunc":
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        # a + c/d with a polynomial is already reduced: gcd(a*d + c, d) = gcd(c, d) = 1
        if self.den.degree == 0:
            return RatFunc(self.num * other.den + other.num, other.den, reduced=True)
        if other.den.degree == 0:
            return RatFunc(other.num * self.den + self.num, self.den, reduced=True)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "RatFunc") -> "RatFunc":
        return self + (-other)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den, reduced=True)

    def __mul__(self, other: "RatFunc") -> "RatFunc":
        # cancel across before multiplying; both inputs are reduced, so the
        # product of the cancelled parts is reduced too
        a, b, c, d = self.num, self.den, other.num, other.den
        if a.is_zero() or c.is_zero():
            return RatFunc(Poly(), reduced=True)
        if a.degree > 0 and d.degree > 0:
            g = poly_gcd(a, d)
            if g.degree > 0:
                a, d = a // g, d // g
        if c.degree > 0 and b.degree > 0:
            g = poly_gcd(c, b)
            if g.degree > 0:
                c, b = c // g, b // g
        num, den = a * c, b * d
        lc = den.lc
        if lc != 1:
            num, den = num.scale(1 / lc), den.scale(1 / lc)
        return RatFunc(num, den, reduced=True)

    def reciprocal(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("reciprocal of the zero function")
        return RatFunc(self.den, self.num)

    def __pow__(self, k: int) -> "RatFunc":
        if k < 0:
            return self.reciprocal() ** (-k)
        return RatFunc(self.num ** k, self.den ** k, reduced=True)

    def compose(self, inner: Poly) -> "RatFunc":
        return RatFunc(self.num.compose(inner), self.den.compose(inner))

    def __call__(self, n: Number) -> Fraction | None:
        """Exact value at n, or None at a pole."""
        d = self.den(n)
        if d == 0:
            return None
        return self.num(n) / d

    def eventual_sign(self) -> int:
        # den is monic, so eventually positive
        return sign(self.num.lc)

    def limit(self) -> Fraction | None:
        """Limit as n -> inf, or None when it is infinite."""
        dp, dq = self.num.degree, self.den.degree
        if self.num.is_zero() or dp < dq:
            return Fraction(0)
        if dp == dq:
            return self.num.lc / self.den.lc
        return None

    def pole_free_from(self) -> int:
        return root_free_from(self.den)


def _fmt_rat(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_poly(p: Poly, var: str = "n") -> str:
    """Render in the expression grammar, e.g. ``3*n^2 + n - 1/2``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        first = not parts
        if first:
            mag = c
        else:
            mag = abs(c)
            parts.append("-" if c < 0 else "+")
        if mono == "":
            body = _fmt_rat(mag)
        elif mag == 1:
            body = mono
        elif first and mag == -1:
            body = f"-1*{mono}"
        else:
            body = f"{_fmt_rat(mag)}*{mono}"
        parts.append(body)
    return " ".join(parts)


def format_ratfunc(f: RatFunc, var: str = "n") -> str:
    if f.den.degree == 0:
        return format_poly(f.num, var)
    # print with integer coefficients: (2n+5) rather than 2*(n+5/2)
    cs = f.num.coeffs + f.den.coeffs
    scale = Fraction(reduce(lcm, (c.denominator for c in cs), 1),
                     reduce(gcd, (c.numerator for c in cs), 0))
    num = format_poly(f.num.scale(scale), var)
    den_p = f.den.scale(scale)
    if sum(1 for c in f.num.coeffs if c) > 1:
        num = f"({num})"
    den = format_poly(den_p, var)
    if not re.fullmatch(rf"{var}(\^\d+)?", den):
        den = f"({den})"
    return f"{num}/{den}"
