"""Nonstandard extensions *A of rational interval sets, hypernaturals, and
evaluation of a sequence at a hypernatural index."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Union

from .errors import DomainTooSmall, NotHypernatural, ParseError
from .filters import DEFAULT_FRAGMENT, UltraFragment
from .hyper import Germ, classify, format_rational
from .poly import Poly, RatFunc, root_free_from


@dataclass(frozen=True)
class Point:
    value: Fraction

    def contains(self, x: Fraction) -> bool:
        return x == self.value


@dataclass(frozen=True)
class Interval:
    lo: Fraction | None  # None is -inf
    hi: Fraction | None  # None is +inf
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        if self.lo is not None and self.hi is not None and not self.lo < self.hi:
            raise ValueError(f"degenerate interval ({self.lo}, {self.hi})")
        if (self.lo is None and self.lo_closed) or (self.hi is None and self.hi_closed):
            raise ValueError("an infinite end cannot be closed")

    def contains(self, x: Fraction) -> bool:
        if self.lo is not None and (x < self.lo or (x == self.lo and not self.lo_closed)):
            return False
        if self.hi is not None and (x > self.hi or (x == self.hi and not self.hi_closed)):
            return False
        return True


Piece = Union[Point, Interval]


class RealSetDesc:
    """Finite disjoint union of rational points and intervals, kept canonical."""

    __slots__ = ("pieces",)

    def __init__(self, pieces: Iterable[Piece] = ()):
        self.pieces: tuple[Piece, ...] = _canonical(tuple(pieces))

    def contains(self, x) -> bool:
        x = Fraction(x)
        return any(p.contains(x) for p in self.pieces)

    __contains__ = contains

    def is_finite(self) -> bool:
        return all(isinstance(p, Point) for p in self.pieces)

    def is_empty(self) -> bool:
        return not self.pieces

    def _combine(self, other: "RealSetDesc", op) -> "RealSetDesc":
        atoms = _atoms(_breakpoints(self.pieces + other.pieces))
        keep = [a for a in atoms if op(self.contains(_sample(a)), other.contains(_sample(a)))]
        return RealSetDesc(_from_atoms(atoms, keep))

    def union(self, other: "RealSetDesc") -> "RealSetDesc":
        return self._combine(other, lambda x, y: x or y)

    def intersection(self, other: "RealSetDesc") -> "RealSetDesc":
        return self._combine(other, lambda x, y: x and y)

    def difference(self, other: "RealSetDesc") -> "RealSetDesc":
        return self._combine(other, lambda x, y: x and not y)

    def complement(self) -> "RealSetDesc":
        return RealSetDesc([Interval(None, None)]).difference(self)

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    def issubset(self, other: "RealSetDesc") -> bool:
        return self.difference(other).is_empty()

    def __eq__(self, other) -> bool:
        return isinstance(other, RealSetDesc) and self.pieces == other.pieces

    def __hash__(self) -> int:
        return hash(self.pieces)

    def to_text(self) -> str:
        out = []
        for p in self.pieces:
            if isinstance(p, Point):
                out.append("{" + format_rational(p.value) + "}")
            else:
                lo = "-inf" if p.lo is None else format_rational(p.lo)
                hi = "inf" if p.hi is None else format_rational(p.hi)
                out.append(("[" if p.lo_closed else "(") + f"{lo},{hi}" + ("]" if p.hi_closed else ")"))
        return " ".join(out) if out else "{}"

    def __repr__(self) -> str:
        return f"RealSetDesc({self.to_text()})"


def _breakpoints(pieces: Iterable[Piece]) -> list[Fraction]:
    pts = set()
    for p in pieces:
        if isinstance(p, Point):
            pts.add(p.value)
        else:
            if p.lo is not None:
                pts.add(p.lo)
            if p.hi is not None:
                pts.add(p.hi)
    return sorted(pts)


def _atoms(bps: list[Fraction]) -> list[tuple]:
    """Ordered cells of the line: ('gap', lo, hi) open cells and ('pt', v)."""
    atoms: list[tuple] = []
    prev = None
    for b in bps:
        atoms.append(("gap", prev, b))
        atoms.append(("pt", b))
        prev = b
    atoms.append(("gap", prev, None))
    return atoms


def _sample(atom: tuple) -> Fraction:
    if atom[0] == "pt":
        return atom[1]
    _, lo, hi = atom
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def _from_atoms(atoms: list[tuple], keep: list[tuple]) -> list[Piece]:
    kept = set(map(id, keep))
    out: list[Piece] = []
    run: list[tuple] = []

    def flush():
        if not run:
            return
        first, last = run[0], run[-1]
        if len(run) == 1 and first[0] == "pt":
            out.append(Point(first[1]))
        else:
            lo, lo_closed = (first[1], True) if first[0] == "pt" else (first[1], False)
            hi, hi_closed = (last[1], True) if last[0] == "pt" else (last[2], False)
            out.append(Interval(lo, hi, lo_closed, hi_closed))
        run.clear()

    for a in atoms:
        if id(a) in kept:
            run.append(a)
        else:
            flush()
    flush()
    return out


def _canonical(pieces: tuple[Piece, ...]) -> tuple[Piece, ...]:
    atoms = _atoms(_breakpoints(pieces))
    keep = [a for a in atoms if any(p.contains(_sample(a)) for p in pieces)]
    return tuple(_from_atoms(atoms, keep))


_PIECE = re.compile(
    r"\{\s*(?P<pt>[^}\s]+)\s*\}"
    r"|(?P<lb>[\(\[])\s*(?P<lo>[^,\s]+)\s*,\s*(?P<hi>[^\]\)\s]+)\s*(?P<rb>[\)\]])"
)


def _endpoint(tok: str, text: str) -> Fraction | None:
    t = tok.strip().lower()
    if t in ("inf", "+inf", "-inf"):
        return None
    m = re.fullmatch(r"(-?\d+)(?:/(\d+))?", t)
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        raise ParseError(f"bad endpoint {tok!r}", (0, len(text.encode())), text)
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def parse_realset(text: str) -> RealSetDesc:
    """Parse e.g. ``"(0,2]  {3}  [5,inf)"``."""
    pieces: list[Piece] = []
    pos = 0
    s = text
    while True:
        while pos < len(s) and s[pos].isspace():
            pos += 1
        if pos >= len(s):
            break
        m = _PIECE.match(s, pos)
        if not m:
            start = len(s[:pos].encode())
            raise ParseError(f"bad set piece near {s[pos:pos + 10]!r}", (start, start + 1), text)
        if m.group("pt") is not None:
            v = _endpoint(m.group("pt"), text)
            if v is None:
                raise ParseError("a point cannot be infinite", (0, len(text.encode())), text)
            pieces.append(Point(v))
        else:
            lo_tok, hi_tok = m.group("lo").lower(), m.group("hi").lower()
            lo, hi = _endpoint(lo_tok, text), _endpoint(hi_tok, text)
            if (lo is None and lo_tok not in ("-inf",)) or (hi is None and hi_tok not in ("inf", "+inf")):
                raise ParseError("-inf is only a lower end and inf only an upper end", (0, len(text.encode())), text)
            try:
                pieces.append(Interval(lo, hi, m.group("lb") == "[", m.group("rb") == "]"))
            except ValueError as exc:
                raise ParseError(str(exc), (0, len(text.encode())), text) from exc
        pos = m.end()
    return RealSetDesc(pieces)


# ---- *A membership -------------------------------------------------------------

def _eventually(f: RatFunc, piece: Piece) -> bool:
    if isinstance(piece, Point):
        return (f - RatFunc.const(piece.value)).is_zero()
    if piece.lo is not None:
        s = (f - RatFunc.const(piece.lo)).eventual_sign()
        if s < 0 or (s == 0 and not piece.lo_closed):
            return False
    if piece.hi is not None:
        s = (RatFunc.const(piece.hi) - f).eventual_sign()
        if s < 0 or (s == 0 and not piece.hi_closed):
            return False
    return True


def star_member(x, a: RealSetDesc, u: UltraFragment = DEFAULT_FRAGMENT) -> bool:
    """Whether x lies in *A, i.e. a_n is in A for a fragment-large set of n."""
    f = Germ.lift(x).selected(u)
    return any(_eventually(f, p) for p in a.pieces)


def nonstandard_witness(a: RealSetDesc) -> Germ:
    """A non-constant germ in *A, built inside the first interval of A."""
    for p in a.pieces:
        if isinstance(p, Interval):
            lo, hi = p.lo, p.hi
            if lo is None and hi is None:
                lo, hi = Fraction(-1), Fraction(1)
            elif lo is None:
                lo = hi - 2
            elif hi is None:
                hi = lo + 2
            mid, width = (lo + hi) / 2, hi - lo
            return Germ.const(mid) + Germ.const(width / 4) * Germ((RatFunc.index().reciprocal(),))
    raise ValueError("set has no interval, so *A adds no new elements")


# ---- hypernaturals ------------------------------------------------------------------

@dataclass(frozen=True)
class HyperNat:
    """A certified element of *N: on the selected class n = r (mod m) the germ
    is the polynomial ``poly`` and ``poly(m*t + r)`` is a natural number for
    every large t.  ``germ`` is a natural-valued representative."""

    germ: Germ
    poly: Poly
    modulus: int
    residue: int

    def is_standard(self) -> bool:
        return self.poly.degree <= 0

    def standard_value(self) -> int | None:
        return int(self.poly.const_value()) if self.is_standard() else None

    def class_poly(self) -> Poly:
        """t -> poly(m*t + r)."""
        return self.poly.compose(Poly((self.residue, self.modulus)))

    def __call__(self, n: int) -> int:
        v = self.germ(n)
        return int(v)


def _integer_valued(q: Poly) -> bool:
    # integer at deg+1 consecutive integers implies integer everywhere
    return all(q(t).denominator == 1 for t in range(max(q.degree, 0) + 1))


def _shift(p: Poly, delta: int) -> Poly:
    return p.compose(Poly((-delta, 1))) if delta else p


def as_hypernatural(x, u: UltraFragment = DEFAULT_FRAGMENT) -> HyperNat:
    x = Germ.lift(x)
    m = x.modulus
    r = u.residue(m)
    f = x.pieces[r]
    if not f.is_poly():
        raise NotHypernatural("non-polynomial", str(f))
    p = f.num.scale(1 / f.den.lc)
    q = p.compose(Poly((r, m)))
    if not _integer_valued(q):
        raise NotHypernatural("non-integer-valued", str(x))
    if p.lc < 0 or (p.degree <= 0 and p.const_value() < 0):
        raise NotHypernatural("eventually negative", str(x))
    pieces = [RatFunc(_shift(p, (j - r) % m)) for j in range(m)]
    bound = max(root_free_from(pc.num) for pc in pieces) if p.degree > 0 else 0
    return HyperNat(Germ(pieces, max(x.threshold, bound)), p, m, r)


def compose(a, omega: HyperNat) -> Germ:
    """The germ of n -> a(omega(n)): the hypersequence *a evaluated at omega."""
    a = Germ.lift(a)
    p = omega.poly
    if p.degree <= 0:
        c = p.const_value()
        if c < a.threshold:
            raise DomainTooSmall(f"index {c} lies below the domain threshold {a.threshold}")
        v = a(int(c))
        if v is None:
            raise DomainTooSmall(f"index {c} is a pole")
        return Germ.const(v)
    m, r, ma = omega.modulus, omega.residue, a.modulus
    q = omega.class_poly()
    den = 1
    for c in q.coeffs:
        den = lcm(den, c.denominator)
    big = m * ma * den
    pieces = []
    shifted = {}
    threshold = omega.germ.threshold
    for rho in range(big):
        j = rho % m
        delta = (j - r) % m
        t0 = (rho - delta - r) // m
        k = int(q(t0)) % ma
        if delta not in shifted:
            sp = _shift(p, delta)
            shifted[delta] = sp
            threshold = max(threshold, root_free_from(sp - Poly.const(a.threshold)))
        pieces.append(a.piece(k).compose(shifted[delta]))
    return Germ(pieces, threshold)


def is_infinite_hypernatural(w: HyperNat, u: UltraFragment = DEFAULT_FRAGMENT) -> bool:
    return classify(w.germ, u).infinitely_large
